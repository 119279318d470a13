#ifndef DEEPR_CONFORMANCE_HPP
#define DEEPR_CONFORMANCE_HPP

#include <string>
#include <vector>

namespace deepr {

enum class ChunkStatus { Pass, Fail, Skipped, ErrorMismatch };

struct ChunkResult {
  std::string file;
  int line = 0;
  ChunkStatus status = ChunkStatus::Pass;
  std::string source;
  std::vector<std::string> expected;
  std::vector<std::string> actual;
  std::string diff;
};

struct ConformanceReport {
  std::vector<ChunkResult> chunks;
  int passed = 0;
  int failed = 0;
  int skipped = 0;

  bool ok() const { return failed == 0; }
};

// Runs one corpus file: interleaved source and `## `-prefixed expected
// output, with `#%` pragma comments (digits, width, skip, error-ok,
// fresh-env).
ConformanceReport run_conformance_file(const std::string& path);

// Runs every *.Rt file in a directory (optionally filtered by substring).
ConformanceReport run_conformance_dir(const std::string& dir,
                                      const std::string& filter = "");

std::string report_to_text(const ConformanceReport& rep, bool verbose);

// all chunk sources of a corpus directory (parser fixed-point sweeps)
std::vector<std::string> corpus_chunk_sources(const std::string& dir);
std::string report_to_json(const ConformanceReport& rep);

}  // namespace deepr

#endif  // DEEPR_CONFORMANCE_HPP
