#pragma once

#include "common.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace graphpd::eval {

struct SpeakerVote {
  int predicted = 0;
  std::array<double, 2> mean_probs{0.0, 0.0};
};

// A speaker's segments as row indices into a probability matrix, plus the
// speaker's true label (used only for scoring).
struct SpeakerGroup {
  std::vector<std::size_t> rows;
  int label = 0;
};

// Averages each group's 2-class probability rows; argmax with exact ties
// resolved to class 0. Throws "empty-speaker" for a group with no rows.
std::vector<SpeakerVote> soft_vote(const Matrix& segment_probs,
                                   std::span<const SpeakerGroup> groups);

// Percentage of groups whose vote matches their label, in [0, 100].
double speaker_accuracy(const Matrix& segment_probs, std::span<const SpeakerGroup> groups);

}  // namespace graphpd::eval
