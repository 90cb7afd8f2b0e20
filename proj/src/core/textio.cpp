#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "core/geometry.hpp"
#include "core/sampling.hpp"

namespace pwe {

std::string format_double(double v) {
  char buf[64];
  // shortest representation that round-trips exactly
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

namespace {

std::vector<double> parse_numbers(std::istream& in, size_t count, const char* what) {
  std::vector<double> out;
  out.reserve(count);
  double v;
  while (out.size() < count && (in >> v)) out.push_back(v);
  if (out.size() < count)
    throw ConfigError(std::string(what) + ": expected " + std::to_string(count) +
                      " numbers, found " + std::to_string(out.size()));
  return out;
}

void expect_no_trailing(std::istream& in, const char* what) {
  double v;
  if (in >> v) throw ConfigError(std::string(what) + ": trailing data after expected content");
}

}  // namespace

PointSet read_pointset_text(const std::string& text) {
  std::istringstream in(text);
  long long d = 0, n = 0;
  if (!(in >> d >> n)) throw ConfigError("point set: header must be 'd n'");
  if (d < 1 || d > 64) throw ConfigError("point set: dimension out of range");
  if (n < 0) throw ConfigError("point set: negative count");
  PointSet ps(static_cast<int>(d));
  ps.coords = parse_numbers(in, static_cast<size_t>(d * n), "point set");
  expect_no_trailing(in, "point set");
  return ps;
}

std::string write_pointset_text(const PointSet& ps) {
  std::string out = std::to_string(ps.dim) + " " + std::to_string(ps.size()) + "\n";
  for (int i = 0; i < ps.size(); ++i) {
    for (int k = 0; k < ps.dim; ++k) {
      if (k) out += ' ';
      out += format_double(ps.at(i)[k]);
    }
    out += '\n';
  }
  return out;
}

BlockDensity read_block_density_text(const std::string& text) {
  std::istringstream in(text);
  long long m = 0, d = 0;
  if (!(in >> m >> d)) throw ConfigError("block density: header must be 'm d'");
  if (m < 1 || m > 4096) throw ConfigError("block density: level out of range");
  if (d < 1 || d > 16) throw ConfigError("block density: dimension out of range");
  long long cells = 1;
  for (int k = 0; k < d; ++k) {
    cells *= m;
    if (cells > (1 << 26)) throw ConfigError("block density: too many cells");
  }
  std::vector<double> w = parse_numbers(in, static_cast<size_t>(cells), "block density");
  expect_no_trailing(in, "block density");
  try {
    return BlockDensity(static_cast<int>(m), static_cast<int>(d), std::move(w));
  } catch (const UsageError& e) {
    throw ConfigError(e.what());
  }
}

std::string write_block_density_text(const BlockDensity& density) {
  std::string out = std::to_string(density.m) + " " + std::to_string(density.dim) + "\n";
  for (int i = 0; i < density.cells(); ++i) {
    out += format_double(density.weights[i]);
    out += '\n';
  }
  return out;
}

}  // namespace pwe
