#include "pcsim/cloud_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace pcsim {

namespace {

[[noreturn]] void parse_fail(const std::string &source, std::size_t line,
                             const std::string &what) {
  throw Error(ErrorCode::ParseError,
              source + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    }
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    }
    if (i > start) {
      out.push_back(s.substr(start, i - start));
    }
  }
  return out;
}

bool to_double(std::string_view tok, double &out) {
  if (!tok.empty() && tok.front() == '+') {
    tok.remove_prefix(1);
  }
  const auto *end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, out);
  return res.ec == std::errc() && res.ptr == end;
}

std::string lower_ext(const std::filesystem::path &path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

} // namespace

PointCloud parse_xyz(std::istream &in, const std::string &source) {
  std::vector<Point3> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    const auto tokens = split_ws(view);
    if (tokens.empty()) {
      continue;
    }
    if (tokens.size() != 3) {
      parse_fail(source, lineno,
                 "expected 3 coordinates, found " + std::to_string(tokens.size()));
    }
    Point3 p;
    for (std::size_t a = 0; a < 3; ++a) {
      if (!to_double(tokens[a], p[a])) {
        parse_fail(source, lineno, "bad number '" + std::string(tokens[a]) + "'");
      }
    }
    if (!p.finite()) {
      parse_fail(source, lineno, "non-finite coordinate");
    }
    pts.push_back(p);
  }
  if (pts.empty()) {
    throw Error(ErrorCode::ParseError, source + ": no points");
  }
  return PointCloud(std::move(pts));
}

PointCloud parse_ply(std::istream &in, const std::string &source) {
  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> properties;
  };
  std::vector<Element> elements;
  std::string line;
  std::size_t lineno = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) {
      return false;
    }
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    return true;
  };

  if (!next_line() || split_ws(line) != std::vector<std::string_view>{"ply"}) {
    parse_fail(source, lineno, "missing 'ply' magic");
  }
  bool have_format = false;
  for (;;) {
    if (!next_line()) {
      parse_fail(source, lineno, "unterminated header");
    }
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info") {
      continue;
    }
    if (tok[0] == "end_header") {
      break;
    }
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii") {
        parse_fail(source, lineno, "only 'format ascii 1.0' is supported");
      }
      have_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) {
        parse_fail(source, lineno, "malformed element line");
      }
      Element e;
      e.name = std::string(tok[1]);
      std::size_t count = 0;
      const auto res = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), count);
      if (res.ec != std::errc()) {
        parse_fail(source, lineno, "bad element count");
      }
      e.count = count;
      elements.push_back(std::move(e));
    } else if (tok[0] == "property") {
      if (elements.empty() || tok.size() < 3) {
        parse_fail(source, lineno, "property outside an element");
      }
      elements.back().properties.emplace_back(tok.back());
    } else {
      parse_fail(source, lineno, "unknown header keyword '" + std::string(tok[0]) + "'");
    }
  }
  if (!have_format) {
    parse_fail(source, lineno, "missing format line");
  }

  std::vector<Point3> pts;
  bool have_vertex = false;
  for (const auto &e : elements) {
    if (e.name != "vertex") {
      for (std::size_t i = 0; i < e.count; ++i) {
        if (!next_line()) {
          parse_fail(source, lineno, "truncated '" + e.name + "' element");
        }
      }
      continue;
    }
    have_vertex = true;
    std::size_t axis_col[3];
    for (std::size_t a = 0; a < 3; ++a) {
      const std::string name(1, "xyz"[a]);
      const auto it = std::find(e.properties.begin(), e.properties.end(), name);
      if (it == e.properties.end()) {
        parse_fail(source, lineno, "vertex element lacks property " + name);
      }
      axis_col[a] = static_cast<std::size_t>(it - e.properties.begin());
    }
    pts.reserve(e.count);
    for (std::size_t i = 0; i < e.count; ++i) {
      if (!next_line()) {
        parse_fail(source, lineno, "truncated vertex list");
      }
      const auto tok = split_ws(line);
      if (tok.size() < e.properties.size()) {
        parse_fail(source, lineno, "vertex row has too few values");
      }
      Point3 p;
      for (std::size_t a = 0; a < 3; ++a) {
        if (!to_double(tok[axis_col[a]], p[a])) {
          parse_fail(source, lineno, "bad number '" + std::string(tok[axis_col[a]]) + "'");
        }
      }
      if (!p.finite()) {
        parse_fail(source, lineno, "non-finite coordinate");
      }
      pts.push_back(p);
    }
  }
  if (!have_vertex) {
    parse_fail(source, lineno, "no vertex element");
  }
  if (pts.empty()) {
    throw Error(ErrorCode::ParseError, source + ": no points");
  }
  return PointCloud(std::move(pts));
}

PointCloud read_cloud(const std::filesystem::path &path) {
  const auto ext = lower_ext(path);
  if (ext != ".xyz" && ext != ".ply") {
    throw Error(ErrorCode::ParseError,
                path.string() + ": unsupported extension '" + ext + "'");
  }
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::ParseError, path.string() + ": cannot open");
  }
  return ext == ".xyz" ? parse_xyz(in, path.string()) : parse_ply(in, path.string());
}

void write_xyz(const PointCloud &cloud, std::ostream &out) {
  char buf[96];
  for (const auto &p : cloud) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
    out << buf;
  }
}

void write_ply(const PointCloud &cloud, std::ostream &out) {
  out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
      << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
  write_xyz(cloud, out);
}

void write_cloud(const PointCloud &cloud, const std::filesystem::path &path) {
  const auto ext = lower_ext(path);
  if (ext != ".xyz" && ext != ".ply") {
    throw Error(ErrorCode::ParseError,
                path.string() + ": unsupported extension '" + ext + "'");
  }
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::ParseError, path.string() + ": cannot open for writing");
  }
  if (ext == ".ply") {
    write_ply(cloud, out);
  } else {
    write_xyz(cloud, out);
  }
  if (!out) {
    throw Error(ErrorCode::ParseError, path.string() + ": write failed");
  }
}

} // namespace pcsim
