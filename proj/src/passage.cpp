#include "cornerlab/passage.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "cornerlab/parallel.hpp"
#include "cornerlab/rng.hpp"
#include "cornerlab/stats.hpp"

namespace cornerlab {

namespace {

constexpr std::int64_t kTile = 64;
constexpr char kMagic[8] = {'C', 'L', 'P', 'P', 'L', 'A', 'N', 'E'};
constexpr std::uint32_t kBinaryVersion = 1;

void copy_weights(const SiteWeightField& field, const LatticeWindow& window,
                  std::vector<double>& out, int workers) {
  if (!field.window().contains(window)) {
    throw OutOfWindow("plane window exceeds the weight field window");
  }
  out.resize(window.size());
  parallel_for(static_cast<std::size_t>(window.height()), workers, [&](std::size_t row) {
    const std::size_t base = row * static_cast<std::size_t>(window.width());
    for (std::int64_t c = 0; c < window.width(); ++c) {
      out[base + static_cast<std::size_t>(c)] =
          field.unchecked(window.site(base + static_cast<std::size_t>(c)));
    }
  });
}

void check_exact_range(const SiteWeightField& field, const std::vector<double>& weights,
                       const LatticeWindow& reachable) {
  double m = 0.0;
  for (double w : weights) m = std::max(m, std::abs(w));
  const double bound = m * static_cast<double>(reachable.width() + reachable.height());
  if (bound >= field.exact_sum_limit()) {
    throw ArithmeticOverflow("path sums could exceed the exact range of the weight representation");
  }
}

template <class Cell>
void run_tiles(const LatticeWindow& reachable, bool reverse, int workers, Cell&& cell) {
  const std::int64_t rows = reachable.height();
  const std::int64_t cols = reachable.width();
  const auto tile_rows = static_cast<std::size_t>((rows + kTile - 1) / kTile);
  const auto tile_cols = static_cast<std::size_t>((cols + kTile - 1) / kTile);
  wavefront(tile_rows, tile_cols, workers, [&](std::size_t tr, std::size_t tc) {
    if (reverse) {
      tr = tile_rows - 1 - tr;
      tc = tile_cols - 1 - tc;
    }
    const std::int64_t r0 = static_cast<std::int64_t>(tr) * kTile;
    const std::int64_t c0 = static_cast<std::int64_t>(tc) * kTile;
    const std::int64_t r1 = std::min(rows, r0 + kTile);
    const std::int64_t c1 = std::min(cols, c0 + kTile);
    if (!reverse) {
      for (std::int64_t r = r0; r < r1; ++r)
        for (std::int64_t c = c0; c < c1; ++c) cell(r, c);
    } else {
      for (std::int64_t r = r1 - 1; r >= r0; --r)
        for (std::int64_t c = c1 - 1; c >= c0; --c) cell(r, c);
    }
  });
}

template <class T>
void put_le(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  auto raw = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = std::endian::native == std::endian::little ? raw[i] : raw[sizeof(T) - 1 - i];
  }
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
  std::array<unsigned char, sizeof(T)> raw{};
  is.read(reinterpret_cast<char*>(raw.data()), sizeof(T));
  if (!is) throw std::runtime_error("truncated plane dump");
  if constexpr (std::endian::native != std::endian::little) std::reverse(raw.begin(), raw.end());
  return std::bit_cast<T>(raw);
}

}  // namespace

std::size_t PassagePlane::tie_count() const {
  return static_cast<std::size_t>(
      std::count(argmax_.begin(), argmax_.end(), static_cast<std::uint8_t>(kViaE1 | kViaE2)));
}

PassagePlane forward_plane(const SiteWeightField& field, Site source, const LatticeWindow& window,
                           int workers) {
  if (!window.contains(source)) throw OutOfWindow("source " + to_string(source) + " outside window");
  PassagePlane p;
  p.anchor_ = source;
  p.orientation_ = Orientation::Forward;
  p.window_ = window;
  p.reachable_ = LatticeWindow::spanning(source, window.upper_right());
  copy_weights(field, window, p.weights_, workers);
  check_exact_range(field, p.weights_, p.reachable_);
  p.values_.assign(window.size(), kNoPath);
  p.argmax_.assign(window.size(), 0);

  const LatticeWindow& reach = p.reachable_;
  const auto width = static_cast<std::size_t>(window.width());
  run_tiles(reach, false, workers, [&](std::int64_t r, std::int64_t c) {
    const std::size_t i = window.unchecked_index({reach.origin().x + c, reach.origin().y + r});
    if (r == 0 && c == 0) {
      p.values_[i] = 0.0;
      return;
    }
    double best = kNoPath;
    std::uint8_t bits = 0;
    if (c > 0) {
      best = p.values_[i - 1] + p.weights_[i - 1];
      bits = kViaE1;
    }
    if (r > 0) {
      const double up = p.values_[i - width] + p.weights_[i - width];
      if (bits == 0 || up > best) {
        best = up;
        bits = kViaE2;
      } else if (up == best) {
        bits |= kViaE2;
      }
    }
    p.values_[i] = best;
    p.argmax_[i] = bits;
  });
  return p;
}

PassagePlane forward_plane(const SiteWeightField& field, Site source, int workers) {
  return forward_plane(field, source, LatticeWindow::spanning(source, field.window().upper_right()),
                       workers);
}

PassagePlane backward_plane(const SiteWeightField& field, Site sink, const LatticeWindow& window,
                            int workers) {
  if (!window.contains(sink)) throw OutOfWindow("sink " + to_string(sink) + " outside window");
  PassagePlane p;
  p.anchor_ = sink;
  p.orientation_ = Orientation::Backward;
  p.window_ = window;
  p.reachable_ = LatticeWindow::spanning(window.origin(), sink);
  copy_weights(field, window, p.weights_, workers);
  check_exact_range(field, p.weights_, p.reachable_);
  p.values_.assign(window.size(), kNoPath);
  p.argmax_.assign(window.size(), 0);

  const LatticeWindow& reach = p.reachable_;
  const std::int64_t last_r = reach.height() - 1;
  const std::int64_t last_c = reach.width() - 1;
  const auto width = static_cast<std::size_t>(window.width());
  run_tiles(reach, true, workers, [&](std::int64_t r, std::int64_t c) {
    const std::size_t i = window.unchecked_index({reach.origin().x + c, reach.origin().y + r});
    if (r == last_r && c == last_c) {
      p.values_[i] = 0.0;
      return;
    }
    double best = kNoPath;
    std::uint8_t bits = 0;
    if (c < last_c) {
      best = p.values_[i + 1];
      bits = kViaE1;
    }
    if (r < last_r) {
      const double up = p.values_[i + width];
      if (bits == 0 || up > best) {
        best = up;
        bits = kViaE2;
      } else if (up == best) {
        bits |= kViaE2;
      }
    }
    p.values_[i] = p.weights_[i] + best;
    p.argmax_[i] = bits;
  });
  return p;
}

PassagePlane backward_plane(const SiteWeightField& field, Site sink, int workers) {
  return backward_plane(field, sink, LatticeWindow::spanning(field.window().origin(), sink), workers);
}

void PassagePlane::export_csv(std::ostream& os) const {
  os << "x,y,G\n";
  char buf[32];
  for (std::size_t i = 0; i < window_.size(); ++i) {
    const Site s = window_.site(i);
    os << s.x << ',' << s.y << ',';
    if (values_[i] == kNoPath) {
      os << "-inf\n";
    } else {
      auto res = std::to_chars(buf, buf + sizeof buf, values_[i]);
      os << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
    }
  }
}

void PassagePlane::export_binary(std::ostream& os) const {
  os.write(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(os, kBinaryVersion);
  put_le<std::uint8_t>(os, static_cast<std::uint8_t>(orientation_));
  put_le<std::uint8_t>(os, static_cast<std::uint8_t>(convention()));
  put_le<std::uint16_t>(os, 0);
  put_le<std::int64_t>(os, window_.origin().x);
  put_le<std::int64_t>(os, window_.origin().y);
  put_le<std::int64_t>(os, window_.width());
  put_le<std::int64_t>(os, window_.height());
  put_le<std::int64_t>(os, anchor_.x);
  put_le<std::int64_t>(os, anchor_.y);
  for (double v : values_) put_le<double>(os, v);
}

PassagePlane::BinaryImage PassagePlane::read_binary(std::istream& is) {
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || !std::equal(magic, magic + 8, kMagic)) throw std::runtime_error("not a plane dump");
  if (get_le<std::uint32_t>(is) != kBinaryVersion) throw std::runtime_error("unknown dump version");
  BinaryImage img;
  img.orientation = static_cast<Orientation>(get_le<std::uint8_t>(is));
  img.convention = static_cast<EndpointConvention>(get_le<std::uint8_t>(is));
  (void)get_le<std::uint16_t>(is);
  const Site origin{get_le<std::int64_t>(is), get_le<std::int64_t>(is)};
  const std::int64_t w = get_le<std::int64_t>(is);
  const std::int64_t h = get_le<std::int64_t>(is);
  img.window = LatticeWindow(origin, w, h);
  img.anchor = {get_le<std::int64_t>(is), get_le<std::int64_t>(is)};
  img.values.resize(img.window.size());
  for (double& v : img.values) v = get_le<double>(is);
  return img;
}

// ---- gradients -------------------------------------------------------------

GradientPlane::GradientPlane(const PassagePlane& backward) : sink_(backward.anchor()) {
  if (backward.orientation() != Orientation::Backward) {
    throw OrientationError("gradient planes are defined on backward planes");
  }
  window_ = backward.reachable();
  const std::size_t n = window_.size();
  i_.resize(n);
  j_.resize(n);
  w_.resize(n);
  g_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Site x = window_.site(k);
    const double gx = backward.at(x);
    g_[k] = gx;
    w_[k] = backward.weight(x);
    i_[k] = x.x < sink_.x ? gx - backward.at(x + kE1) : kUnbounded;
    j_[k] = x.y < sink_.y ? gx - backward.at(x + kE2) : kUnbounded;
  }
}

GradientPlane gradient_plane(const PassagePlane& backward) { return GradientPlane(backward); }

IdentityReport check_recovery(const GradientPlane& g) {
  IdentityReport rep;
  const LatticeWindow& w = g.window();
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Site x = w.site(k);
    if (x == g.sink()) continue;
    ++rep.checked;
    if (std::min(g.horizontal(x), g.vertical(x)) != g.weight(x)) {
      if (rep.violations++ == 0) rep.first_violation = x;
    }
  }
  return rep;
}

IdentityReport check_closure(const GradientPlane& g) {
  IdentityReport rep;
  const LatticeWindow& w = g.window();
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Site x = w.site(k);
    if (!dominated(x + kE1 + kE2, g.sink())) continue;
    ++rep.checked;
    if (g.horizontal(x) + g.vertical(x + kE1) != g.vertical(x) + g.horizontal(x + kE2)) {
      if (rep.violations++ == 0) rep.first_violation = x;
    }
  }
  return rep;
}

// ---- gradient chains -------------------------------------------------------

MonotonicityReport check_gradient_chains(const PassagePlane& from_root, const PassagePlane& from_e1,
                                         const PassagePlane& from_e2) {
  const Site root = from_root.anchor();
  if (from_e1.anchor() != root + kE1 || from_e2.anchor() != root + kE2 ||
      from_root.orientation() != Orientation::Forward ||
      from_e1.orientation() != Orientation::Forward ||
      from_e2.orientation() != Orientation::Forward) {
    throw std::invalid_argument("chain check needs forward planes from root, root+e1, root+e2");
  }
  const LatticeWindow reach = from_root.reachable();
  if (!from_e1.window().contains(reach) || !from_e2.window().contains(reach)) {
    throw std::invalid_argument("chain check planes must cover the root plane");
  }
  // G_{0,u} - G_{e_i,u}; +inf where e_i cannot reach u.
  auto diff = [&](const PassagePlane& p, Site u) {
    const double other = p.at(u);
    return other == kNoPath ? kUnbounded : from_root.at(u) - other;
  };

  MonotonicityReport rep;
  const std::int64_t max_level = reach.width() + reach.height() - 2;
  rep.levels = max_level;
  for (std::int64_t level = 1; level <= max_level; ++level) {
    const std::int64_t k_lo = std::max<std::int64_t>(0, level - (reach.height() - 1));
    const std::int64_t k_hi = std::min<std::int64_t>(level, reach.width() - 1);
    for (std::int64_t k = k_lo; k < k_hi; ++k) {
      const Site u = root + Site{k, level - k};
      const Site v = u + kE1 - kE2;
      rep.comparisons += 2;
      const bool chain1 = diff(from_e1, u) >= diff(from_e1, v);
      const bool chain2 = diff(from_e2, u) <= diff(from_e2, v);
      for (int chain : {1, 2}) {
        if ((chain == 1 ? chain1 : chain2)) continue;
        if (rep.violations++ == 0) rep.first_violation = ChainViolation{level, u, chain};
      }
    }
  }
  return rep;
}

MonotonicityReport check_gradient_monotonicity(const SiteWeightField& field, std::int64_t n,
                                               int workers) {
  if (n < 1) throw std::invalid_argument("level must be at least 1");
  const Site root = field.window().origin();
  const LatticeWindow window = LatticeWindow::spanning(root, root + Site{n, n});
  const PassagePlane p0 = forward_plane(field, root, window, workers);
  const PassagePlane p1 = forward_plane(field, root + kE1, window, workers);
  const PassagePlane p2 = forward_plane(field, root + kE2, window, workers);
  return check_gradient_chains(p0, p1, p2);
}

// ---- shape -----------------------------------------------------------------

double terminal_passage(const WeightDistribution& dist, std::uint64_t seed, Site v) {
  if (v.x < 0 || v.y < 0) throw std::invalid_argument("terminal must lie in the first quadrant");
  const auto width = static_cast<std::size_t>(v.x + 1);
  // g: passage values of the current row; below/row: weights of rows y-1 and y
  std::vector<double> g(width, kNoPath), below(width), row(width);
  for (std::int64_t y = 0; y <= v.y; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      row[x] = sample_weight(dist, seed, Site{static_cast<std::int64_t>(x), y});
    }
    for (std::size_t x = 0; x < width; ++x) {
      double best = (x == 0 && y == 0) ? 0.0 : kNoPath;
      if (x > 0) best = std::max(best, g[x - 1] + row[x - 1]);
      if (y > 0) best = std::max(best, g[x] + below[x]);
      g[x] = best;
    }
    std::swap(row, below);
  }
  return g[width - 1];
}

ShapeEstimate shape_estimate(const WeightDistribution& dist, DirectionU xi, std::int64_t n,
                             std::int64_t replicates, std::uint64_t seed, int workers) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (replicates < 1) throw std::invalid_argument("replicates must be at least 1");
  ShapeEstimate est;
  est.n = n;
  est.terminal = xi.lattice_point(n);
  est.samples.resize(static_cast<std::size_t>(replicates));
  parallel_for(est.samples.size(), workers, [&](std::size_t r) {
    est.samples[r] = terminal_passage(dist, rng::derive_seed(seed, r), est.terminal) /
                     static_cast<double>(n);
  });
  est.mean = stats::mean(est.samples);
  est.standard_error = stats::standard_error(est.samples);
  return est;
}

}  // namespace cornerlab
