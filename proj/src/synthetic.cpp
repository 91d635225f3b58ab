#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

namespace graphpd::synth {

void SynthConfig::validate() const {
  if (speakers_per_class == 0 || segments_per_speaker == 0 || dim == 0) {
    throw_usage("invalid-config", "speaker, segment and dimension counts must be positive");
  }
  if (!(class_separation >= 0.0) || !(speaker_spread >= 0.0)) {
    throw_usage("invalid-config", "class_separation and speaker_spread must be nonnegative");
  }
  if (!(label_noise_rate >= 0.0 && label_noise_rate < 1.0)) {
    throw_usage("invalid-config", "label_noise_rate must lie in [0, 1)");
  }
}

std::size_t noised_segments_per_speaker(const SynthConfig& cfg) {
  // The epsilon keeps e.g. 0.3 * 20 from flooring to 5.
  return static_cast<std::size_t>(
      std::floor(cfg.label_noise_rate * static_cast<double>(cfg.segments_per_speaker) + 1e-9));
}

namespace {

std::string numbered(const char* prefix, std::size_t i, int width) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

}  // namespace

SyntheticDataset generate(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto m = static_cast<Eigen::Index>(cfg.dim);
  auto gaussian = [&](double scale) {
    Vector v(m);
    for (Eigen::Index j = 0; j < m; ++j) v[j] = scale * normal(rng);
    return v;
  };

  Vector direction = gaussian(1.0);
  while (direction.norm() == 0.0) direction = gaussian(1.0);
  direction.normalize();
  const Vector healthy_centroid = -0.5 * cfg.class_separation * direction;
  const Vector pd_centroid = 0.5 * cfg.class_separation * direction;

  const std::size_t noised = noised_segments_per_speaker(cfg);
  SyntheticDataset out;
  out.records.reserve(2 * cfg.speakers_per_class * cfg.segments_per_speaker);

  for (const auto label : {dataset::Label::healthy, dataset::Label::pd}) {
    const bool pd = label == dataset::Label::pd;
    const Vector& centroid = pd ? pd_centroid : healthy_centroid;
    for (std::size_t s = 0; s < cfg.speakers_per_class; ++s) {
      const std::string speaker = numbered(pd ? "pd_" : "hc_", s, 3);
      const Vector speaker_centroid = centroid + gaussian(cfg.speaker_spread);

      std::vector<bool> is_noised(cfg.segments_per_speaker, false);
      if (pd && noised > 0) {
        std::vector<std::size_t> order(cfg.segments_per_speaker);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i = 0; i < noised; ++i) is_noised[order[i]] = true;
      }

      for (std::size_t g = 0; g < cfg.segments_per_speaker; ++g) {
        dataset::SegmentRecord rec;
        rec.speaker_id = speaker;
        rec.segment_id = speaker + numbered("_s", g, 3);
        rec.utterance_id = speaker + "_u0";
        rec.label = label;
        if (is_noised[g]) {
          // A fresh draw from the healthy class: its own sub-centroid plus noise.
          rec.embedding = healthy_centroid + gaussian(cfg.speaker_spread) + gaussian(1.0);
        } else {
          rec.embedding = speaker_centroid + gaussian(1.0);
        }
        out.records.push_back(std::move(rec));
        out.noise_flags.push_back(is_noised[g]);
      }
    }
  }
  return out;
}

void write_noise_flags(const SyntheticDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("io-error", "cannot write " + path.string());
  out << "segment_id\tis_noised\n";
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    out << data.records[i].segment_id << '\t' << (data.noise_flags[i] ? 1 : 0) << '\n';
  }
  if (!out) throw_io("io-error", "failed writing " + path.string());
}

}  // namespace graphpd::synth
