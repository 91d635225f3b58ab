#include "voting.hpp"

namespace graphpd::eval {

std::vector<SpeakerVote> soft_vote(const Matrix& segment_probs,
                                   std::span<const SpeakerGroup> groups) {
  if (segment_probs.cols() != 2) throw_usage("shape-mismatch", "soft voting expects 2 classes");
  std::vector<SpeakerVote> votes;
  votes.reserve(groups.size());
  for (const auto& g : groups) {
    if (g.rows.empty()) throw_data("empty-speaker", "speaker has no segments to vote with");
    SpeakerVote v;
    for (auto r : g.rows) {
      v.mean_probs[0] += segment_probs(static_cast<Eigen::Index>(r), 0);
      v.mean_probs[1] += segment_probs(static_cast<Eigen::Index>(r), 1);
    }
    const double inv = 1.0 / static_cast<double>(g.rows.size());
    v.mean_probs[0] *= inv;
    v.mean_probs[1] *= inv;
    v.predicted = v.mean_probs[1] > v.mean_probs[0] ? 1 : 0;
    votes.push_back(v);
  }
  return votes;
}

double speaker_accuracy(const Matrix& segment_probs, std::span<const SpeakerGroup> groups) {
  if (groups.empty()) return 0.0;
  const auto votes = soft_vote(segment_probs, groups);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    if (votes[i].predicted == groups[i].label) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(groups.size());
}

}  // namespace graphpd::eval
