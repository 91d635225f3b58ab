#include "dataset.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace graphpd::dataset {

namespace {

constexpr int kFormatVersion = 1;

std::uint32_t read_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

float f32_from_le(const unsigned char* p) {
  std::uint32_t bits = read_u32_le(p);
  return std::bit_cast<float>(bits);
}

void f32_to_le(float v, char* out) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) out[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::int64_t parse_int(const std::string& s, const char* what) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw_data("malformed-manifest", std::string("cannot parse ") + what + " '" + s + "'");
  }
  return v;
}

Label parse_label(const std::string& s) {
  if (s == "0") return Label::healthy;
  if (s == "1") return Label::pd;
  throw_data("invalid-label", "label '" + s + "' is not in {0,1}");
}

}  // namespace

SpeakerTable::SpeakerTable(const std::vector<SegmentRecord>& records) {
  std::map<std::string, Speaker> by_id;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto [it, inserted] = by_id.try_emplace(r.speaker_id);
    auto& spk = it->second;
    if (inserted) {
      spk.id = r.speaker_id;
      spk.label = r.label;
    } else if (spk.label != r.label) {
      throw_data("inconsistent-speaker-label",
                 "speaker '" + r.speaker_id + "' carries both labels");
    }
    spk.segment_ids.push_back(r.segment_id);
    spk.nodes.push_back(i);
  }
  speakers_.reserve(by_id.size());
  for (auto& [id, spk] : by_id) {
    index_.emplace(id, speakers_.size());
    speakers_.push_back(std::move(spk));
  }
}

std::size_t SpeakerTable::index_of(const std::string& speaker_id) const {
  auto it = index_.find(speaker_id);
  if (it == index_.end()) throw_data("unknown-speaker", "no speaker '" + speaker_id + "'");
  return it->second;
}

std::size_t SpeakerTable::count(Label label) const {
  return static_cast<std::size_t>(std::count_if(
      speakers_.begin(), speakers_.end(), [&](const Speaker& s) { return s.label == label; }));
}

void validate_records(const std::vector<SegmentRecord>& records) {
  if (records.empty()) throw_data("empty-dataset", "dataset has no records");
  const auto m = records.front().embedding.size();
  if (m == 0) throw_data("zero-dimension", "embeddings have zero dimension");
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (r.embedding.size() != m) {
      throw_data("dimension-mismatch", "segment '" + r.segment_id + "' has embedding length " +
                                           std::to_string(r.embedding.size()) + ", expected " +
                                           std::to_string(m));
    }
    if (r.label != Label::healthy && r.label != Label::pd) {
      throw_data("invalid-label", "segment '" + r.segment_id + "' has a label outside {0,1}");
    }
    if (!seen.insert(r.segment_id).second) {
      throw_data("duplicate-segment", "segment id '" + r.segment_id + "' appears twice");
    }
  }
  SpeakerTable check(records);  // throws on inconsistent labels
}

std::vector<SegmentRecord> load_dataset(const std::filesystem::path& embedding_path,
                                        const std::filesystem::path& manifest_path) {
  std::ifstream bin(embedding_path, std::ios::binary);
  if (!bin) throw_io("io-error", "cannot open " + embedding_path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(bin)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 4) throw_data("malformed-header", "embedding file shorter than 4 bytes");
  const std::uint32_t header_len = read_u32_le(bytes.data());
  if (bytes.size() - 4 < header_len) {
    throw_data("malformed-header", "header length exceeds file size");
  }

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 4, bytes.begin() + 4 + header_len);
  } catch (const nlohmann::json::exception& e) {
    throw_data("malformed-header", std::string("header is not valid JSON: ") + e.what());
  }
  if (!header.is_object() || !header.contains("n") || !header.contains("m") ||
      !header["n"].is_number_unsigned() || !header["m"].is_number_unsigned()) {
    throw_data("malformed-header", "header must hold unsigned integers n and m");
  }
  if (header.value("dtype", "") != "f32" || header.value("byte_order", "") != "little") {
    throw_data("malformed-header", "header must declare dtype f32 and byte_order little");
  }
  if (header.contains("version") &&
      (!header["version"].is_number_integer() || header["version"].get<int>() != kFormatVersion)) {
    throw_data("malformed-header", "unsupported format version");
  }
  const auto n = header["n"].get<std::uint64_t>();
  const auto m = header["m"].get<std::uint64_t>();
  if (n == 0) throw_data("empty-dataset", "header declares n = 0");
  if (m == 0) throw_data("zero-dimension", "header declares m = 0");

  const std::size_t payload = bytes.size() - 4 - header_len;
  if (payload != n * m * 4) {
    throw_data("size-mismatch", "payload is " + std::to_string(payload) + " bytes, expected " +
                                    std::to_string(n * m * 4));
  }
  const unsigned char* data = bytes.data() + 4 + header_len;

  std::ifstream tsv(manifest_path);
  if (!tsv) throw_io("io-error", "cannot open " + manifest_path.string());
  std::string line;
  if (!std::getline(tsv, line)) throw_data("malformed-manifest", "manifest is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto columns = split_tabs(line);
  auto column = [&](const std::string& name) -> std::ptrdiff_t {
    auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : it - columns.begin();
  };
  const auto c_seg = column("segment_id"), c_spk = column("speaker_id"),
             c_lab = column("label"), c_row = column("row_index"),
             c_utt = column("utterance_id");
  if (c_seg < 0 || c_spk < 0 || c_lab < 0 || c_row < 0) {
    throw_data("malformed-manifest",
               "manifest header must contain segment_id, speaker_id, label, row_index");
  }

  std::vector<SegmentRecord> records;
  std::vector<bool> row_used(n, false);
  std::size_t line_no = 1;
  while (std::getline(tsv, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != columns.size()) {
      throw_data("malformed-manifest", "line " + std::to_string(line_no) + " has " +
                                           std::to_string(fields.size()) + " fields, expected " +
                                           std::to_string(columns.size()));
    }
    const auto row = parse_int(fields[c_row], "row_index");
    if (row < 0 || static_cast<std::uint64_t>(row) >= n) {
      throw_data("bad-row-index", "row_index " + fields[c_row] + " outside 0.." +
                                      std::to_string(n - 1));
    }
    if (row_used[row]) {
      throw_data("duplicate-row", "row_index " + fields[c_row] + " referenced twice");
    }
    row_used[row] = true;

    SegmentRecord rec;
    rec.segment_id = fields[c_seg];
    rec.speaker_id = fields[c_spk];
    rec.label = parse_label(fields[c_lab]);
    if (c_utt >= 0) rec.utterance_id = fields[c_utt];
    rec.embedding.resize(static_cast<Eigen::Index>(m));
    const unsigned char* src = data + static_cast<std::size_t>(row) * m * 4;
    for (std::uint64_t j = 0; j < m; ++j) {
      rec.embedding[static_cast<Eigen::Index>(j)] = f32_from_le(src + 4 * j);
    }
    records.push_back(std::move(rec));
  }
  if (records.size() != n) {
    throw_data("size-mismatch", "manifest lists " + std::to_string(records.size()) +
                                    " rows, header declares " + std::to_string(n));
  }
  validate_records(records);
  return records;
}

void write_dataset(const std::vector<SegmentRecord>& records,
                   const std::filesystem::path& embedding_path,
                   const std::filesystem::path& manifest_path) {
  validate_records(records);
  const auto n = records.size();
  const auto m = static_cast<std::size_t>(records.front().embedding.size());

  const nlohmann::json header = {{"n", n},
                                 {"m", m},
                                 {"dtype", "f32"},
                                 {"byte_order", "little"},
                                 {"version", kFormatVersion}};
  const std::string header_text = header.dump();

  std::ofstream bin(embedding_path, std::ios::binary | std::ios::trunc);
  if (!bin) throw_io("io-error", "cannot write " + embedding_path.string());
  write_u32_le(bin, static_cast<std::uint32_t>(header_text.size()));
  bin.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  std::vector<char> row(m * 4);
  for (const auto& r : records) {
    for (std::size_t j = 0; j < m; ++j) {
      f32_to_le(static_cast<float>(r.embedding[static_cast<Eigen::Index>(j)]), row.data() + 4 * j);
    }
    bin.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!bin) throw_io("io-error", "failed writing " + embedding_path.string());

  std::ofstream tsv(manifest_path, std::ios::binary | std::ios::trunc);
  if (!tsv) throw_io("io-error", "cannot write " + manifest_path.string());
  tsv << "segment_id\tspeaker_id\tlabel\trow_index\tutterance_id\n";
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = records[i];
    tsv << r.segment_id << '\t' << r.speaker_id << '\t' << to_int(r.label) << '\t' << i << '\t'
        << r.utterance_id << '\n';
  }
  if (!tsv) throw_io("io-error", "failed writing " + manifest_path.string());
}

Dataset::Dataset(std::vector<SegmentRecord> records) : records_(std::move(records)) {
  validate_records(records_);
  const auto n = static_cast<Eigen::Index>(records_.size());
  const auto m = records_.front().embedding.size();
  features_.resize(n, m);
  labels_.resize(records_.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    features_.row(i) = records_[i].embedding.transpose();
    labels_[i] = to_int(records_[i].label);
  }
  speakers_ = SpeakerTable(records_);
  speaker_of_node_.resize(records_.size());
  for (std::size_t s = 0; s < speakers_.size(); ++s) {
    for (auto node : speakers_[s].nodes) speaker_of_node_[node] = s;
  }
}

}  // namespace graphpd::dataset
