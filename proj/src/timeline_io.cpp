#include "choreo/timeline_io.hpp"

#include <fstream>

#include "choreo/json_codec.hpp"

namespace choreo {

void write_json_file(const std::filesystem::path& file, const nlohmann::ordered_json& doc) {
  std::error_code ec;
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path(), ec);
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write " + file.string());
    out << doc.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::io, "cannot write " + file.string());
  }
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw Error(ErrorCode::io, "cannot write " + file.string() + ": " + ec.message());
}

nlohmann::ordered_json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + file.string());
  try {
    return nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::invalid_input, file.string() + ": " + e.what());
  }
}

std::array<std::filesystem::path, 3> emit(const Timeline& timeline, const std::filesystem::path& out_dir) {
  if (timeline.narration.empty()) throw Error(ErrorCode::precondition, "cannot emit an empty timeline");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (!std::filesystem::is_directory(out_dir)) {
    throw Error(ErrorCode::io, "cannot create output directory " + out_dir.string());
  }
  const auto docs = codec::to_documents(timeline);
  std::array<std::filesystem::path, 3> paths = {out_dir / kTimelineFiles[0], out_dir / kTimelineFiles[1],
                                                out_dir / kTimelineFiles[2]};
  write_json_file(paths[0], docs.narration);
  write_json_file(paths[1], docs.visuals);
  write_json_file(paths[2], docs.gestures);
  return paths;
}

Timeline load_timeline(const std::filesystem::path& dir) {
  codec::TimelineDocuments docs;
  docs.narration = read_json_file(dir / kTimelineFiles[0]);
  docs.visuals = read_json_file(dir / kTimelineFiles[1]);
  docs.gestures = read_json_file(dir / kTimelineFiles[2]);
  return codec::timeline_from_documents(docs);
}

}  // namespace choreo
