#pragma once

#include "common.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace graphpd::dataset {

enum class Label : int { healthy = 0, pd = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }

struct SegmentRecord {
  std::string segment_id;
  std::string speaker_id;
  Label label = Label::healthy;
  Vector embedding;
  std::string utterance_id;  // provenance only
};

struct Speaker {
  std::string id;
  Label label = Label::healthy;
  std::vector<std::string> segment_ids;
  std::vector<std::size_t> nodes;  // row positions in the owning Dataset
};

// Speakers ordered by id, each with its segments in record order.
class SpeakerTable {
 public:
  SpeakerTable() = default;
  explicit SpeakerTable(const std::vector<SegmentRecord>& records);

  std::size_t size() const { return speakers_.size(); }
  const Speaker& operator[](std::size_t i) const { return speakers_[i]; }
  const std::vector<Speaker>& speakers() const { return speakers_; }
  std::size_t index_of(const std::string& speaker_id) const;
  std::size_t count(Label label) const;

 private:
  std::vector<Speaker> speakers_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Checks the record-set invariants: nonempty, m > 0 and uniform, unique
// segment ids, one label per speaker. Throws graphpd::Error.
void validate_records(const std::vector<SegmentRecord>& records);

// Reads a length-prefixed JSON header + f32 payload and its TSV manifest.
// Records come back in manifest line order.
std::vector<SegmentRecord> load_dataset(const std::filesystem::path& embedding_path,
                                        const std::filesystem::path& manifest_path);

// Row i of the payload is records[i]; the manifest lists records in order.
void write_dataset(const std::vector<SegmentRecord>& records,
                   const std::filesystem::path& embedding_path,
                   const std::filesystem::path& manifest_path);

// Immutable, validated view used by every downstream module.
class Dataset {
 public:
  explicit Dataset(std::vector<SegmentRecord> records);

  std::size_t size() const { return records_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features_.cols()); }

  const std::vector<SegmentRecord>& records() const { return records_; }
  const Matrix& features() const { return features_; }  // n x m
  const std::vector<int>& labels() const { return labels_; }
  const SpeakerTable& speakers() const { return speakers_; }
  std::size_t speaker_of(std::size_t node) const { return speaker_of_node_[node]; }

 private:
  std::vector<SegmentRecord> records_;
  Matrix features_;
  std::vector<int> labels_;
  SpeakerTable speakers_;
  std::vector<std::size_t> speaker_of_node_;
};

// Directory layout used by the CLI.
inline constexpr const char* kEmbeddingFile = "embeddings.bin";
inline constexpr const char* kManifestFile = "manifest.tsv";
inline constexpr const char* kNoiseFlagsFile = "noise_flags.tsv";

}  // namespace graphpd::dataset
