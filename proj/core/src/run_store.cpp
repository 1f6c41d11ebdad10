#include "chaineval/run_store.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "chaineval/errors.hpp"
#include "chaineval/fingerprint.hpp"
#include "json_util.hpp"

namespace chaineval {

RunStoreWriter::RunStoreWriter(const std::filesystem::path& path)
    : path_(path) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory '" +
                    path.parent_path().string() + "': " + ec.message());
    }
  }
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) {
    throw IoError("cannot open run store for append: " + path.string());
  }
}

void RunStoreWriter::append(const EpisodeRecord& record) {
  std::lock_guard<std::mutex> lock(mutex_);
  out_ << to_json_line(record) << '\n';
  out_.flush();
  if (!out_) {
    throw IoError("write failed: " + path_.string());
  }
}

std::vector<EpisodeRecord> load_run_store(const std::filesystem::path& path) {
  const std::string content = detail::read_file(path);
  std::vector<EpisodeRecord> records;
  std::istringstream lines(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(episode_from_json_line(line));
    } catch (const std::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return records;
}

std::string run_fingerprint(const std::vector<EpisodeRecord>& records,
                            const std::string& catalog_version) {
  std::set<std::string> configs;
  for (const EpisodeRecord& record : records) {
    configs.insert(record.config_fingerprint);
  }
  std::string material = "catalog:" + catalog_version;
  for (const std::string& config : configs) {
    material += "\n";
    material += config;
  }
  return fingerprint_hex(material);
}

}  // namespace chaineval
