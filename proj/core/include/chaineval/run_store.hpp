#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include "chaineval/episode.hpp"

namespace chaineval {

// Append-only JSON-lines store, one EpisodeRecord per line. Writes are
// serialized and flushed per record so concurrent episodes can append as
// they complete.
class RunStoreWriter {
 public:
  explicit RunStoreWriter(const std::filesystem::path& path);

  void append(const EpisodeRecord& record);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::mutex mutex_;
};

// Reads every record from a run store. Throws IoError when the file is
// missing, ParseError/ValidationError for malformed or wrong-version lines.
std::vector<EpisodeRecord> load_run_store(const std::filesystem::path& path);

// Content-derived provenance stamp: hash of the sorted distinct per-episode
// config fingerprints plus the catalog version. Timing-free, so two runs of
// the same configuration produce the same stamp.
std::string run_fingerprint(const std::vector<EpisodeRecord>& records,
                            const std::string& catalog_version = "");

}  // namespace chaineval
