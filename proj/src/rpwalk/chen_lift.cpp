#include "rpwalk/chen_lift.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace rpwalk {

namespace {

void validate_times(std::span<const double> times) {
  if (times.size() < 2) throw RangeError("a lifted path needs at least 2 grid points");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k])) throw RangeError("non-finite grid time");
    if (k > 0 && !(times[k] > times[k - 1])) throw RangeError("grid times must be strictly increasing");
  }
}

bool is_unit(const GroupElement& g) {
  auto c = g.series().coefficients();
  return std::all_of(c.begin() + 1, c.end(), [](double x) { return x == 0.0; });
}

LieElement level_one_part(const LieElement& a) {
  LieElement out(a.dim(), a.depth());
  std::copy(a.level(1).begin(), a.level(1).end(), out.level(1).begin());
  return out;
}

void append_double(std::string& out, double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

}  // namespace

std::string_view to_string(Interpolation mode) {
  return mode == Interpolation::linear_lift ? "linear-lift" : "log-linear";
}

Interpolation interpolation_from_string(std::string_view name) {
  if (name == "linear-lift") return Interpolation::linear_lift;
  if (name == "log-linear") return Interpolation::log_linear;
  throw ParseError("unknown interpolation tag '" + std::string(name) + "'");
}

void LiftedPath::finish() {
  dim_ = points_.front().dim();
  depth_ = points_.front().depth();
  logs_.clear();
  logs_.reserve(points_.size());
  for (const auto& p : points_) logs_.push_back(log(p));
}

LiftedPath LiftedPath::from_generators(std::vector<double> times, std::vector<LieElement> generators,
                                       Interpolation mode) {
  validate_times(times);
  if (generators.size() + 1 != times.size())
    throw DimensionError("need exactly one generator per grid segment");
  LiftedPath p;
  p.mode_ = mode;
  p.times_ = std::move(times);
  p.points_.reserve(p.times_.size());
  p.points_.emplace_back(generators.front().dim(), generators.front().depth());
  for (auto& g : generators) {
    if (mode == Interpolation::linear_lift) g = level_one_part(g);
    p.points_.push_back(p.points_.back() * exp(g));
  }
  p.generators_ = std::move(generators);
  p.finish();
  return p;
}

LiftedPath LiftedPath::from_points(std::vector<double> times, std::vector<GroupElement> points, Interpolation mode) {
  validate_times(times);
  if (points.size() != times.size()) throw DimensionError("need exactly one point per grid time");
  if (!is_unit(points.front())) throw DomainError("a lifted path must start at the unit element");
  std::vector<LieElement> gens;
  gens.reserve(points.size() - 1);
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    points[k + 1].series().require_same_shape(points[k].series());
    auto g = log(inverse(points[k]) * points[k + 1]);
    gens.push_back(mode == Interpolation::linear_lift ? level_one_part(g) : std::move(g));
  }
  return from_parts(std::move(times), std::move(points), std::move(gens), mode);
}

LiftedPath LiftedPath::from_parts(std::vector<double> times, std::vector<GroupElement> points,
                                  std::vector<LieElement> generators, Interpolation mode) {
  validate_times(times);
  if (points.size() != times.size() || generators.size() + 1 != times.size())
    throw DimensionError("inconsistent point/generator counts");
  LiftedPath p;
  p.mode_ = mode;
  p.times_ = std::move(times);
  p.points_ = std::move(points);
  p.generators_ = std::move(generators);
  p.finish();
  return p;
}

LiftedPath lift_linear_chords(std::span<const double> samples, int dim, int depth, std::span<const double> times) {
  if (dim < 1) throw DimensionError("dimension must be positive");
  if (samples.size() % static_cast<std::size_t>(dim) != 0)
    throw DimensionError("sample buffer length is not a multiple of the dimension");
  const std::size_t count = samples.size() / static_cast<std::size_t>(dim);
  if (count < 2) throw RangeError("lift_linear_chords needs at least 2 samples");
  std::vector<double> grid;
  if (times.empty()) {
    grid.resize(count);
    for (std::size_t k = 0; k < count; ++k) grid[k] = static_cast<double>(k) / static_cast<double>(count - 1);
  } else {
    if (times.size() != count) throw DimensionError("one time per sample required");
    grid.assign(times.begin(), times.end());
  }
  std::vector<LieElement> gens;
  gens.reserve(count - 1);
  for (std::size_t k = 1; k < count; ++k) {
    LieElement v(dim, depth);
    auto l1 = v.level(1);
    for (int i = 0; i < dim; ++i) l1[i] = samples[k * dim + i] - samples[(k - 1) * dim + i];
    gens.push_back(std::move(v));
  }
  return LiftedPath::from_generators(std::move(grid), std::move(gens), Interpolation::linear_lift);
}

GroupElement interpolate(const LiftedPath& path, double t) {
  auto times = path.times();
  if (!(t >= times.front() && t <= times.back()))
    throw RangeError("time " + std::to_string(t) + " outside the path grid [" + std::to_string(times.front()) +
                     ", " + std::to_string(times.back()) + "]");
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t k = static_cast<std::size_t>(it - times.begin()) - 1;
  if (times[k] == t) return path.point(k);
  const double theta = (t - times[k]) / (times[k + 1] - times[k]);
  return path.point(k) * exp(theta * path.generator(k));
}

GroupElement increment(const LiftedPath& path, double s, double t) {
  if (s > t) throw RangeError("increment requires s <= t");
  return inverse(interpolate(path, s)) * interpolate(path, t);
}

GroupElement signature(const LiftedPath& path) { return increment(path, path.start_time(), path.end_time()); }

std::vector<double> level_one_samples(const LiftedPath& path) {
  std::vector<double> out;
  out.reserve(path.size() * static_cast<std::size_t>(path.dim()));
  for (const auto& p : path.points()) {
    auto l1 = p.level(1);
    out.insert(out.end(), l1.begin(), l1.end());
  }
  return out;
}

std::string serialize(const LiftedPath& path) {
  std::string out = "rpwalk-lifted-path 1\n";
  out += "dim " + std::to_string(path.dim()) + "\n";
  out += "depth " + std::to_string(path.depth()) + "\n";
  out += "interpolation ";
  out += to_string(path.interpolation());
  out += "\npoints " + std::to_string(path.size()) + "\n";
  for (std::size_t k = 0; k < path.size(); ++k) {
    append_double(out, path.times()[k]);
    const auto& lg = path.point_log(k).series().coefficients();
    for (std::size_t j = 1; j < lg.size(); ++j) {
      out += ' ';
      append_double(out, lg[j]);
    }
    out += '\n';
  }
  return out;
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::string_view next() {
    while (pos_ <= text_.size()) {
      auto end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      auto line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) return line;
    }
    throw ParseError("unexpected end of lifted-path text");
  }
  std::size_t line_no() const { return line_no_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_double(std::string_view tok, std::size_t line) {
  double x = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError("bad number '" + std::string(tok) + "' on line " + std::to_string(line));
  return x;
}

long parse_int(std::string_view tok, std::size_t line) {
  long x = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError("bad integer '" + std::string(tok) + "' on line " + std::to_string(line));
  return x;
}

std::string_view expect_key(LineReader& r, std::string_view key) {
  auto toks = split_ws(r.next());
  if (toks.size() != 2 || toks[0] != key)
    throw ParseError("expected '" + std::string(key) + " <value>' on line " + std::to_string(r.line_no()));
  return toks[1];
}

}  // namespace

LiftedPath parse_lifted_path(std::string_view text) {
  LineReader r(text);
  {
    auto toks = split_ws(r.next());
    if (toks.size() != 2 || toks[0] != "rpwalk-lifted-path" || toks[1] != "1")
      throw ParseError("missing 'rpwalk-lifted-path 1' header");
  }
  const long dim = parse_int(expect_key(r, "dim"), r.line_no());
  const long depth = parse_int(expect_key(r, "depth"), r.line_no());
  const Interpolation mode = interpolation_from_string(expect_key(r, "interpolation"));
  const long count = parse_int(expect_key(r, "points"), r.line_no());
  if (dim < 1 || dim > kMaxDim || depth < 1 || depth > kMaxDepth) throw ParseError("dim/depth out of range");
  if (count < 2) throw ParseError("a lifted path needs at least 2 points");

  const std::size_t ncoords = series_size(static_cast<int>(dim), static_cast<int>(depth)) - 1;
  std::vector<double> times;
  std::vector<LieElement> logs;
  times.reserve(static_cast<std::size_t>(count));
  logs.reserve(static_cast<std::size_t>(count));
  std::vector<double> coords(ncoords);
  for (long k = 0; k < count; ++k) {
    auto toks = split_ws(r.next());
    if (toks.size() != ncoords + 1)
      throw ParseError("expected " + std::to_string(ncoords + 1) + " columns on line " + std::to_string(r.line_no()));
    times.push_back(parse_double(toks[0], r.line_no()));
    for (std::size_t j = 0; j < ncoords; ++j) coords[j] = parse_double(toks[j + 1], r.line_no());
    logs.push_back(LieElement::from_coordinates(static_cast<int>(dim), static_cast<int>(depth), coords));
  }

  std::vector<GroupElement> points;
  points.reserve(logs.size());
  for (const auto& a : logs) points.push_back(exp(a));
  LiftedPath p = LiftedPath::from_points(std::move(times), std::move(points), mode);
  // Keep the parsed coordinates so that re-serialization is byte-identical.
  p.logs_ = std::move(logs);
  return p;
}

}  // namespace rpwalk
