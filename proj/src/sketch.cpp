#include "rangesum/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <sstream>

#include "rangesum/errors.hpp"

namespace rangesum {

std::string to_string(Norm p) { return p == Norm::L1 ? "L1" : "L2"; }

Norm parse_norm(const std::string& name) {
  if (name == "l1" || name == "L1" || name == "1") return Norm::L1;
  if (name == "l2" || name == "L2" || name == "2") return Norm::L2;
  throw ArgumentError("unknown norm '" + name + "' (expected L1 or L2)");
}

void SketchConfig::validate() const {
  if (r == 0) throw ArgumentError("sketch size r must be positive");
  dst_config(0).validate();
}

DstConfig SketchConfig::dst_config(std::size_t j) const {
  SplitMix64 stream(seed);
  std::uint64_t s = 0;
  for (std::size_t i = 0; i <= j; ++i) s = stream.next();
  DstConfig c;
  c.universe_log = universe_log;
  c.distribution = p == Norm::L1 ? Distribution::Cauchy : Distribution::Gaussian;
  c.master_seed = s;
  c.hash = hash;
  return c;
}

LpSketch::LpSketch(const SketchConfig& config) : config_(config) {
  config_.validate();
  dsts_.reserve(config_.r);
  SplitMix64 stream(config_.seed);
  for (std::size_t j = 0; j < config_.r; ++j) {
    DstConfig c = config_.dst_config(0);
    c.master_seed = stream.next();
    dsts_.emplace_back(c);
  }
  acc_.resize(config_.r);
}

void LpSketch::update(std::uint64_t a, std::uint64_t b, double delta) {
  check_range(a, b, config_.universe_log);
  if (!std::isfinite(delta)) throw ArgumentError("update weight must be finite");
  if (a == b || delta == 0.0) return;
  for (std::size_t j = 0; j < acc_.size(); ++j) {
    acc_[j].add(delta * dsts_[j].range_sum(a, b));
  }
}

void LpSketch::update_batch(std::span<const RangeUpdate> updates) {
  const auto segs = segments_from_updates(updates, config_.universe_log);
  if (segs.empty()) return;
  for (std::size_t j = 0; j < acc_.size(); ++j) {
    acc_[j].add(dsts_[j].inner_product(segs));
  }
}

std::vector<double> LpSketch::accumulators() const {
  std::vector<double> out;
  out.reserve(acc_.size());
  for (const auto& a : acc_) out.push_back(a.value());
  return out;
}

double LpSketch::estimate_l2() const {
  if (config_.p != Norm::L2) {
    throw ArgumentError("estimate_l2 called on an L1 (Cauchy) sketch");
  }
  ExactSum s;
  for (const auto& a : acc_) {
    const double v = a.value();
    s.add(v * v);
  }
  return s.value() / static_cast<double>(acc_.size());
}

double LpSketch::estimate_l1() const {
  if (config_.p != Norm::L1) {
    throw ArgumentError("estimate_l1 called on an L2 (Gaussian) sketch");
  }
  std::vector<double> v;
  v.reserve(acc_.size());
  for (const auto& a : acc_) v.push_back(std::fabs(a.value()));
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  if (v.size() % 2 == 1) return v[m];
  return 0.5 * (v[m - 1] + v[m]);
}

double LpSketch::estimate_norm() const {
  return config_.p == Norm::L1 ? estimate_l1() : std::sqrt(estimate_l2());
}

void LpSketch::merge_from(const LpSketch& other) {
  if (!(config_ == other.config_)) {
    throw ArgumentError(
        "cannot merge sketches with different (p, r, universe_log, seed, hash)");
  }
  for (std::size_t j = 0; j < acc_.size(); ++j) acc_[j].add(other.acc_[j]);
}

LpSketch LpSketch::merge(const LpSketch& s1, const LpSketch& s2) {
  LpSketch out = s1;
  out.merge_from(s2);
  return out;
}

std::string LpSketch::export_state() const {
  std::ostringstream os;
  os << "rangesum-sketch 1\n"
     << "p " << to_string(config_.p) << "\n"
     << "r " << config_.r << "\n"
     << "universe_log " << config_.universe_log << "\n"
     << "seed " << config_.seed << "\n"
     << "hash " << config_.hash.name() << "\n"
     << "accumulators\n";
  char buf[40];
  for (const auto& a : acc_) {
    std::snprintf(buf, sizeof buf, "%.17g\n", a.value());
    os << buf;
  }
  return os.str();
}

namespace {

[[noreturn]] void bad_state(const std::string& what) {
  throw ArgumentError("malformed sketch state: " + what);
}

}  // namespace

LpSketch LpSketch::import_state(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string key;
  int version = 0;
  if (!(in >> key >> version) || key != "rangesum-sketch" || version != 1) {
    bad_state("missing 'rangesum-sketch 1' header");
  }
  SketchConfig c;
  bool seen_p = false, seen_r = false, seen_u = false, seen_s = false, seen_h = false;
  while (in >> key && key != "accumulators") {
    std::string value;
    if (!(in >> value)) bad_state("no value for '" + key + "'");
    try {
      if (key == "p") {
        c.p = parse_norm(value);
        seen_p = true;
      } else if (key == "r") {
        c.r = std::stoull(value);
        seen_r = true;
      } else if (key == "universe_log") {
        c.universe_log = std::stoi(value);
        seen_u = true;
      } else if (key == "seed") {
        c.seed = std::stoull(value);
        seen_s = true;
      } else if (key == "hash") {
        c.hash = HashFamily::parse(value);
        seen_h = true;
      } else {
        bad_state("unknown field '" + key + "'");
      }
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const ArgumentError*>(&e)) throw;
      bad_state("bad value for '" + key + "'");
    }
  }
  if (key != "accumulators") bad_state("missing accumulator section");
  if (!(seen_p && seen_r && seen_u && seen_s && seen_h)) bad_state("missing field");
  LpSketch s(c);
  for (std::size_t j = 0; j < c.r; ++j) {
    std::string tok;
    if (!(in >> tok)) bad_state("expected " + std::to_string(c.r) + " accumulators");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::logic_error&) {
      bad_state("bad accumulator '" + tok + "'");
    }
    if (used != tok.size() || !std::isfinite(v)) bad_state("bad accumulator '" + tok + "'");
    s.acc_[j] = ExactSum(v);
  }
  std::string extra;
  if (in >> extra) bad_state("trailing data");
  return s;
}

std::vector<Segment> segments_from_updates(std::span<const RangeUpdate> updates,
                                           int universe_log) {
  std::map<std::uint64_t, ExactSum> diff;
  for (const auto& u : updates) {
    check_range(u.a, u.b, universe_log);
    if (!std::isfinite(u.delta)) throw ArgumentError("update weight must be finite");
    if (u.a == u.b || u.delta == 0.0) continue;
    diff[u.a].add(u.delta);
    diff[u.b].add(-u.delta);
  }
  std::vector<Segment> segs;
  ExactSum running;
  std::uint64_t start = 0;
  double weight = 0.0;
  for (const auto& [pos, d] : diff) {
    if (weight != 0.0 && pos > start) segs.push_back({start, pos, weight});
    running.add(d);
    weight = running.value();
    start = pos;
  }
  return segs;
}

ExactCounters::ExactCounters(int universe_log) : universe_log_(universe_log) {
  check_universe_log(universe_log);
  if (universe_log > kMaxUniverseLog) {
    throw ArgumentError("exact counters support universe_log <= " +
                        std::to_string(kMaxUniverseLog));
  }
}

void ExactCounters::add(std::uint64_t a, std::uint64_t b, double delta) {
  check_range(a, b, universe_log_);
  if (!std::isfinite(delta)) throw ArgumentError("update weight must be finite");
  updates_.push_back({a, b, delta});
}

void ExactCounters::add(std::span<const RangeUpdate> updates) {
  for (const auto& u : updates) add(u.a, u.b, u.delta);
}

std::vector<double> ExactCounters::sigma() const {
  const std::uint64_t u = universe_size(universe_log_);
  std::vector<ExactSum> diff(u + 1);
  for (const auto& up : updates_) {
    diff[up.a].add(up.delta);
    diff[up.b].add(-up.delta);
  }
  std::vector<double> out(u);
  ExactSum running;
  for (std::uint64_t i = 0; i < u; ++i) {
    running.add(diff[i]);
    out[i] = running.value();
  }
  return out;
}

Norms oracle_norms(const ExactCounters& counters) {
  const auto segs = segments_from_updates(counters.updates(), counters.universe_log());
  ExactSum l1, l2;
  for (const auto& s : segs) {
    const double len = static_cast<double>(s.end - s.begin);
    l1.add(std::fabs(s.weight) * len);
    l2.add(s.weight * s.weight * len);
  }
  return {l1.value(), std::sqrt(l2.value())};
}

std::vector<RangeUpdate> parse_stream(std::istream& in) {
  std::vector<RangeUpdate> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    RangeUpdate u;
    std::string rest_a = first, rest_b, rest_d, extra;
    if (!(ls >> rest_b >> rest_d) || (ls >> extra)) {
      throw ArgumentError("stream line " + std::to_string(lineno) +
                          ": expected 'a b delta'");
    }
    try {
      std::size_t ua = 0, ub = 0, ud = 0;
      if (rest_a[0] == '-' || rest_b[0] == '-') throw std::invalid_argument("neg");
      u.a = std::stoull(rest_a, &ua);
      u.b = std::stoull(rest_b, &ub);
      u.delta = std::stod(rest_d, &ud);
      if (ua != rest_a.size() || ub != rest_b.size() || ud != rest_d.size()) {
        throw std::invalid_argument("trailing");
      }
    } catch (const std::logic_error&) {
      throw ArgumentError("stream line " + std::to_string(lineno) +
                          ": expected 'a b delta'");
    }
    out.push_back(u);
  }
  return out;
}

}  // namespace rangesum
