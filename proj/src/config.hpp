#pragma once

#include "evaluation.hpp"
#include "synthetic.hpp"

#include <filesystem>
#include <string_view>

// TOML front-ends for the CLI configs. Unknown keys are rejected so typos do
// not silently fall back to defaults; errors carry code "malformed-config".
namespace graphpd::config {

// Top-level keys: speakers_per_class, segments_per_speaker, dim,
// class_separation, speaker_spread, label_noise_rate, seed.
synth::SynthConfig parse_synth_config(std::string_view toml);
synth::SynthConfig load_synth_config(const std::filesystem::path& path);

// Keys lr, k, L, distance override the model's default grid; an optional
// [train] table sets max_epochs, patience, hidden_width, weight_decay,
// beta1, beta2, epsilon.
eval::ExperimentConfig parse_grid_config(std::string_view toml, eval::ModelKind model);
eval::ExperimentConfig load_grid_config(const std::filesystem::path& path, eval::ModelKind model);

// Keys lr, distance, values, a [fixed] table mapping distance -> int (L for
// a k sweep, k for an L sweep), and an optional [train] table.
eval::SweepConfig parse_sweep_config(std::string_view toml, eval::SweepAxis axis);
eval::SweepConfig load_sweep_config(const std::filesystem::path& path, eval::SweepAxis axis);

}  // namespace graphpd::config
