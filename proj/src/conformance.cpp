#include "deepr/conformance.hpp"

#include <algorithm>
#include <filesystem>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "deepr/session.hpp"

namespace deepr {

namespace {

std::string rstrip(const std::string& s) {
  size_t e = s.find_last_not_of(" \t\r");
  return e == std::string::npos ? "" : s.substr(0, e + 1);
}

struct Chunk {
  std::string source;
  std::vector<std::string> expected;
  int line = 0;
  bool skip = false;
  bool error_ok = false;
  int digits = -1;      // pragma state at this chunk
  int width = -1;
  bool fresh_env = false;
};

struct Pragmas {
  int digits = 7;
  int width = 80;
  bool fresh_env = false;
  bool skip_next = false;
  bool error_ok_next = false;
};

[[noreturn]] void harness_error(const std::string& file, int line,
                                const std::string& msg) {
  throw std::runtime_error(file + ":" + std::to_string(line) + ": " + msg);
}

std::vector<Chunk> parse_corpus(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open corpus file '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }

  std::vector<Chunk> chunks;
  Pragmas prag;
  size_t i = 0;
  while (i < lines.size()) {
    const std::string& l = lines[i];
    std::string stripped = rstrip(l);
    if (stripped.empty()) {
      ++i;
      continue;
    }
    if (stripped.rfind("#%", 0) == 0) {
      std::string body = stripped.substr(2);
      size_t colon = body.find(':');
      std::string key = rstrip(colon == std::string::npos
                                   ? body
                                   : body.substr(0, colon));
      size_t ks = key.find_first_not_of(' ');
      key = ks == std::string::npos ? "" : key.substr(ks);
      std::string value;
      if (colon != std::string::npos) {
        value = body.substr(colon + 1);
        size_t vs = value.find_first_not_of(' ');
        value = vs == std::string::npos ? "" : rstrip(value.substr(vs));
      }
      if (key == "digits") {
        if (value.empty()) harness_error(path, static_cast<int>(i + 1),
                                         "digits pragma needs a value");
        prag.digits = std::stoi(value);
      } else if (key == "width") {
        if (value.empty()) harness_error(path, static_cast<int>(i + 1),
                                         "width pragma needs a value");
        prag.width = std::stoi(value);
      } else if (key == "skip") {
        prag.skip_next = true;
      } else if (key == "error-ok") {
        prag.error_ok_next = true;
      } else if (key == "fresh-env") {
        prag.fresh_env = true;
      } else {
        harness_error(path, static_cast<int>(i + 1),
                      "unknown pragma '" + key + "'");
      }
      ++i;
      continue;
    }
    if (stripped.rfind("##", 0) == 0) {
      harness_error(path, static_cast<int>(i + 1),
                    "expected-output line without a source chunk");
    }
    if (stripped[0] == '#') {
      ++i;  // ordinary comment line
      continue;
    }

    // accumulate source lines until the parser reports a complete program
    Chunk chunk;
    chunk.line = static_cast<int>(i + 1);
    std::string source;
    while (i < lines.size()) {
      const std::string& sl = lines[i];
      std::string ss = rstrip(sl);
      if (ss.rfind("##", 0) == 0 || ss.rfind("#%", 0) == 0) break;
      source += source.empty() ? sl : "\n" + sl;
      ++i;
      ParseResult pr = parse_program(source);
      if (pr.incomplete) continue;
      break;  // complete or hard error; either way the chunk text ends here
    }
    chunk.source = source;
    while (i < lines.size()) {
      std::string ss = rstrip(lines[i]);
      if (ss.rfind("##", 0) != 0) break;
      // "## xyz" -> "xyz"; bare "##" -> empty line
      std::string exp = ss.size() > 2 ? ss.substr(3) : "";
      if (ss.size() > 2 && ss[2] != ' ')
        harness_error(path, static_cast<int>(i + 1),
                      "malformed expected-output line");
      chunk.expected.push_back(rstrip(exp));
      ++i;
    }
    chunk.skip = prag.skip_next;
    chunk.error_ok = prag.error_ok_next;
    chunk.digits = prag.digits;
    chunk.width = prag.width;
    chunk.fresh_env = prag.fresh_env;
    prag.skip_next = false;
    prag.error_ok_next = false;
    chunks.push_back(std::move(chunk));
  }
  return chunks;
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::string line;
  std::istringstream is(s);
  while (std::getline(is, line)) out.push_back(rstrip(line));
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

std::string make_diff(const std::vector<std::string>& expected,
                      const std::vector<std::string>& actual) {
  std::string d;
  size_t n = std::max(expected.size(), actual.size());
  for (size_t i = 0; i < n; ++i) {
    const std::string* e = i < expected.size() ? &expected[i] : nullptr;
    const std::string* a = i < actual.size() ? &actual[i] : nullptr;
    if (e && a && *e == *a) {
      d += "  " + *e + "\n";
    } else {
      if (e) d += "- " + *e + "\n";
      if (a) d += "+ " + *a + "\n";
    }
  }
  return d;
}

void run_file_into(const std::string& path, ConformanceReport& rep) {
  std::vector<Chunk> chunks = parse_corpus(path);
  std::unique_ptr<Session> session;
  std::ostringstream sink;

  for (const Chunk& c : chunks) {
    ChunkResult res;
    res.file = path;
    res.line = c.line;
    res.source = c.source;
    res.expected = c.expected;

    if (c.skip) {
      res.status = ChunkStatus::Skipped;
      ++rep.skipped;
      rep.chunks.push_back(std::move(res));
      continue;
    }
    if (!session || c.fresh_env) session = std::make_unique<Session>(sink);
    session->in.opt_digits = c.digits;
    session->in.opt_width = c.width;

    sink.str("");
    bool had_error = false;
    ParseResult pr = parse_program(c.source);
    if (!pr.error.empty()) {
      sink << "Error: " << pr.error << "\n";
      had_error = true;
    } else {
      for (const RPtr& e : pr.exprs) {
        if (!session->run_statement(e, true)) {
          had_error = true;
          break;
        }
      }
    }
    res.actual = split_lines(sink.str());
    std::vector<std::string> expected = c.expected;
    while (!expected.empty() && expected.back().empty()) expected.pop_back();

    if (had_error && !c.error_ok) {
      res.status = ChunkStatus::ErrorMismatch;
      res.diff = make_diff(expected, res.actual);
      ++rep.failed;
    } else if (expected == res.actual) {
      res.status = ChunkStatus::Pass;
      ++rep.passed;
    } else {
      res.status = ChunkStatus::Fail;
      res.diff = make_diff(expected, res.actual);
      ++rep.failed;
    }
    rep.chunks.push_back(std::move(res));
  }
}

}  // namespace

std::vector<std::string> corpus_chunk_sources(const std::string& dir) {
  std::vector<std::string> out;
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".Rt")
      files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files)
    for (const Chunk& c : parse_corpus(f))
      if (!c.skip) out.push_back(c.source);
  return out;
}

ConformanceReport run_conformance_file(const std::string& path) {
  ConformanceReport rep;
  run_file_into(path, rep);
  return rep;
}

ConformanceReport run_conformance_dir(const std::string& dir,
                                      const std::string& filter) {
  ConformanceReport rep;
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (entry.path().extension() != ".Rt") continue;
    if (!filter.empty() && name.find(filter) == std::string::npos) continue;
    files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) run_file_into(f, rep);
  return rep;
}

std::string report_to_text(const ConformanceReport& rep, bool verbose) {
  std::ostringstream os;
  std::string current_file;
  int file_pass = 0, file_total = 0;
  auto flush_file = [&]() {
    if (!current_file.empty())
      os << current_file << ": " << file_pass << "/" << file_total << "\n";
    file_pass = file_total = 0;
  };
  for (const ChunkResult& c : rep.chunks) {
    if (c.file != current_file) {
      flush_file();
      current_file = c.file;
    }
    if (c.status != ChunkStatus::Skipped) ++file_total;
    if (c.status == ChunkStatus::Pass) ++file_pass;
    if (c.status == ChunkStatus::Fail ||
        c.status == ChunkStatus::ErrorMismatch) {
      os << "FAIL " << c.file << ":" << c.line;
      if (c.status == ChunkStatus::ErrorMismatch) os << " (unexpected error)";
      os << "\n";
      std::istringstream src(c.source);
      std::string line;
      while (std::getline(src, line)) os << "  > " << line << "\n";
      os << c.diff;
    } else if (verbose && c.status == ChunkStatus::Pass) {
      os << "ok   " << c.file << ":" << c.line << "\n";
    }
  }
  flush_file();
  os << "chunks: " << rep.passed << " passed, " << rep.failed << " failed, "
     << rep.skipped << " skipped\n";
  return os.str();
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

}  // namespace

std::string report_to_json(const ConformanceReport& rep) {
  std::ostringstream os;
  os << "{\"passed\":" << rep.passed << ",\"failed\":" << rep.failed
     << ",\"skipped\":" << rep.skipped << ",\"chunks\":[";
  bool first = true;
  for (const ChunkResult& c : rep.chunks) {
    if (!first) os << ",";
    first = false;
    const char* status = c.status == ChunkStatus::Pass ? "pass"
                         : c.status == ChunkStatus::Fail ? "fail"
                         : c.status == ChunkStatus::Skipped
                             ? "skipped"
                             : "error-mismatch";
    os << "{\"file\":\"" << json_escape(c.file) << "\",\"line\":" << c.line
       << ",\"status\":\"" << status << "\",\"diff\":\""
       << json_escape(c.diff) << "\"}";
  }
  os << "]}";
  return os.str();
}

}  // namespace deepr
