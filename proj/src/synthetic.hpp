#pragma once

#include "dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace graphpd::synth {

struct SynthConfig {
  std::size_t speakers_per_class = 20;
  std::size_t segments_per_speaker = 20;
  std::size_t dim = 16;
  double class_separation = 10.0;  // centroid distance, in segment-noise std units
  double speaker_spread = 1.0;     // std of speaker sub-centroids around their class centroid
  double label_noise_rate = 0.0;   // fraction of each PD speaker's segments drawn as healthy
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticDataset {
  std::vector<dataset::SegmentRecord> records;
  std::vector<bool> noise_flags;  // per record: drawn from the healthy distribution under a PD label
};

// Healthy speakers first ("hc_000", ...), then PD ("pd_000", ...); segments
// in speaker order.
SyntheticDataset generate(const SynthConfig& cfg);

// Number of label-noised segments per PD speaker.
std::size_t noised_segments_per_speaker(const SynthConfig& cfg);

// "segment_id<TAB>is_noised" with a header row.
void write_noise_flags(const SyntheticDataset& data, const std::filesystem::path& path);

}  // namespace graphpd::synth
