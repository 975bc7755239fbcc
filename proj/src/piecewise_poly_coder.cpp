#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mcp/coders.hpp"
#include "mcp/errors.hpp"

namespace mcp {

namespace {

int degree_field_bits(std::size_t declared_degree) {
  return ceil_log2(static_cast<std::uint64_t>(declared_degree) + 1);
}

double horner(const std::vector<double>& coeffs, double t) {
  double v = 0.0;
  for (std::size_t j = coeffs.size(); j-- > 0;) v = v * t + coeffs[j];
  return v;
}

std::uint64_t round_to_index(double v, Resolution m) {
  const double scaled = std::floor(std::ldexp(v, m.bits()) + 0.5);
  if (!(scaled > 0.0)) return 0;
  const auto j = static_cast<std::uint64_t>(
      std::min(scaled, static_cast<double>(m.max_index())));
  return j;
}

}  // namespace

PiecewisePolyCoder::PiecewisePolyCoder(std::size_t max_breakpoints,
                                       std::size_t max_degree, PolyBasis basis)
    : max_q_(max_breakpoints), max_n_(max_degree), basis_(basis) {}

std::string PiecewisePolyCoder::describe() const {
  std::ostringstream s;
  s << "piecewise_poly(Q=" << max_q_ << ",N=" << max_n_ << ","
    << (basis_ == PolyBasis::kGlobalUnsigned ? "global" : "local") << ")";
  return s.str();
}

int PiecewisePolyCoder::coefficient_bits(Resolution m, std::size_t degree) {
  return m.bits() + degree_field_bits(degree) + 1;
}

std::size_t PiecewisePolyCoder::header_bits(std::size_t, Resolution) const {
  return kTagBits + 2 * static_cast<std::size_t>(delta_length(1));
}

double PiecewisePolyCoder::bound_constant() const {
  // Tag, the two delta codes' excess over log* (4 each), the per-segment
  // degree fields and the extra bit (plus sign bit) of every coefficient.
  const double q1 = static_cast<double>(max_q_ + 1);
  const double n1 = static_cast<double>(max_n_ + 1);
  const double per_coeff = basis_ == PolyBasis::kGlobalUnsigned ? 1.0 : 2.0;
  return kTagBits + 8.0 + q1 * (degree_field_bits(max_n_) + per_coeff * n1);
}

void PiecewisePolyCoder::validate(const std::vector<PolySegment>& segments,
                                  std::size_t n) const {
  if (segments.empty()) throw UnrepresentableError("no segments");
  if (segments.size() > max_q_ + 1) {
    throw UnrepresentableError("segment count " +
                               std::to_string(segments.size()) +
                               " exceeds Q + 1 = " + std::to_string(max_q_ + 1));
  }
  if (segments.front().start != 0) {
    throw UnrepresentableError("first segment must start at sample 0");
  }
  for (std::size_t l = 0; l < segments.size(); ++l) {
    const auto& seg = segments[l];
    if (l > 0 && seg.start <= segments[l - 1].start) {
      throw UnrepresentableError("breakpoints must increase");
    }
    if (seg.start >= n) throw UnrepresentableError("breakpoint beyond n");
    if (seg.coeffs.empty() || seg.coeffs.size() > max_n_ + 1) {
      throw UnrepresentableError("segment degree exceeds N");
    }
    if (basis_ == PolyBasis::kGlobalUnsigned) {
      double sum = 0.0;
      for (double a : seg.coeffs) {
        if (!(a >= 0.0 && a <= 1.0)) {
          throw UnrepresentableError("coefficient outside [0,1]");
        }
        sum += a;
      }
      if (!(sum < 1.0)) throw UnrepresentableError("coefficient sum >= 1");
    } else {
      for (double a : seg.coeffs) {
        if (!(std::abs(a) <= 1.0)) {
          throw UnrepresentableError("coefficient magnitude above 1");
        }
      }
    }
  }
}

namespace {

struct Layout {
  std::size_t n;
  Resolution m;
  std::size_t declared_degree;
  int coeff_bits;
};

void write_segments(BitString& out, const std::vector<PolySegment>& segments,
                    const Layout& layout, PolyBasis basis) {
  const std::size_t q = segments.size() - 1;
  out.write_delta(q + 1);
  out.write_delta(layout.declared_degree + 1);
  const int bp_bits = ceil_log2(layout.n);
  for (std::size_t l = 1; l < segments.size(); ++l) {
    out.write_uint(segments[l].start, bp_bits);
  }
  const std::uint64_t top = (std::uint64_t{1} << layout.coeff_bits) - 1;
  for (const auto& seg : segments) {
    out.write_uint(seg.coeffs.size() - 1, degree_field_bits(layout.declared_degree));
    for (double a : seg.coeffs) {
      const double mag = std::floor(std::ldexp(std::abs(a), layout.coeff_bits));
      const auto idx = std::min(static_cast<std::uint64_t>(mag), top);
      if (basis == PolyBasis::kLocalSigned) out.push_back(a < 0.0 && idx != 0);
      out.write_uint(idx, layout.coeff_bits);
    }
  }
}

}  // namespace

BitString PiecewisePolyCoder::encode_segments(
    const std::vector<PolySegment>& segments, std::size_t n,
    Resolution m) const {
  validate(segments, n);
  std::size_t degree = 0;
  for (const auto& seg : segments) degree = std::max(degree, seg.coeffs.size() - 1);
  BitString out;
  out.write_uint(static_cast<std::uint64_t>(id()), kTagBits);
  write_segments(out, segments, {n, m, degree, coefficient_bits(m, degree)},
                 basis_);
  return out;
}

std::vector<PolySegment> PiecewisePolyCoder::decode_segments(
    BitReader& in, std::size_t n, Resolution m) const {
  if (in.read_uint(kTagBits) != static_cast<std::uint64_t>(id())) {
    throw DecodeError("piecewise_poly: tag mismatch");
  }
  const std::uint64_t q = in.read_delta() - 1;
  const std::uint64_t declared = in.read_delta() - 1;
  if (q > max_q_ || declared > max_n_) {
    throw DecodeError("piecewise_poly: Q or N above coder capacity");
  }
  std::vector<PolySegment> segments(q + 1);
  const int bp_bits = ceil_log2(n);
  for (std::size_t l = 1; l <= q; ++l) {
    segments[l].start = in.read_uint(bp_bits);
    if (segments[l].start <= segments[l - 1].start || segments[l].start >= n) {
      throw DecodeError("piecewise_poly: malformed breakpoints");
    }
  }
  const int cbits = coefficient_bits(m, declared);
  for (auto& seg : segments) {
    const std::uint64_t deg = in.read_uint(degree_field_bits(declared));
    if (deg > declared) throw DecodeError("piecewise_poly: degree above N");
    seg.coeffs.resize(deg + 1);
    for (auto& a : seg.coeffs) {
      const bool negative = basis_ == PolyBasis::kLocalSigned && in.read_bit();
      a = std::ldexp(static_cast<double>(in.read_uint(cbits)), -cbits);
      if (negative) a = -a;
    }
  }
  return segments;
}

Eigen::VectorXd PiecewisePolyCoder::evaluate(
    const std::vector<PolySegment>& segments, std::size_t n) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  std::size_t l = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (l + 1 < segments.size() && segments[l + 1].start <= i) ++l;
    const double origin =
        basis_ == PolyBasis::kGlobalUnsigned ? 0.0 : static_cast<double>(segments[l].start);
    const double t = (static_cast<double>(i) - origin) / static_cast<double>(n);
    out[static_cast<Eigen::Index>(i)] = horner(segments[l].coeffs, t);
  }
  return out;
}

QuantizedSignal PiecewisePolyCoder::round_samples(
    const std::vector<PolySegment>& segments, std::size_t n,
    Resolution m) const {
  const Eigen::VectorXd v = evaluate(segments, n);
  std::vector<std::uint64_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    idx[i] = round_to_index(v[static_cast<Eigen::Index>(i)], m);
  }
  return QuantizedSignal(std::move(idx), m);
}

QuantizedSignal PiecewisePolyCoder::decode(BitReader& in, std::size_t n,
                                           Resolution m) const {
  return round_samples(decode_segments(in, n, m), n, m);
}

namespace {

// Lattice offsets in [-w, w]^dims, nearest first.
const std::vector<std::vector<int>>& search_offsets(std::size_t dims) {
  static std::vector<std::vector<std::vector<int>>> cache(8);
  auto& out = cache.at(dims);
  if (!out.empty()) return out;
  const int w = dims == 0 ? 0 : dims == 1 ? 32 : 3;
  std::vector<int> v(dims, -w);
  while (true) {
    out.push_back(v);
    std::size_t p = 0;
    while (p < dims && v[p] == w) v[p++] = -w;
    if (p == dims) break;
    ++v[p];
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int la = 0, lb = 0;
    for (int x : a) la += std::abs(x);
    for (int x : b) lb += std::abs(x);
    return la < lb;
  });
  return out;
}

constexpr std::size_t kExactCurvatureSamples = 40;
constexpr int kCurvatureCandidates = 512;

// Lattice values of the coefficients of degree two and up to try, nearest
// the least-squares fit first. For quadratics on short pieces the range of
// a2 is exact: a2 is the second divided difference of any three samples,
// and every sample value is confined to its rounding interval.
std::vector<std::vector<double>> high_candidates(const QuantizedSignal& q, std::size_t s,
                                                 const std::vector<double>& t,
                                                 std::size_t degree, int cbits, bool global,
                                                 const std::vector<double>& base) {
  std::vector<std::vector<double>> out;
  if (degree < 2) return {{}};
  const double top = std::ldexp(1.0, cbits) - 1.0;
  if (degree == 2 && t.size() <= kExactCurvatureSamples) {
    const double inf = std::numeric_limits<double>::infinity();
    const Resolution m = q.resolution();
    const double half = std::ldexp(0.5, -m.bits());
    const double unit = std::ldexp(top, -cbits);
    std::vector<double> tt, L, H;
    for (std::size_t r = 0; r < t.size(); ++r) {
      const double v = q.value(s + r);
      tt.push_back(t[r]);
      L.push_back(q.index(s + r) > 0 ? v - half : -inf);
      H.push_back(q.index(s + r) < m.max_index() ? v + half : inf);
    }
    if (t.front() > 0.0) {
      tt.insert(tt.begin(), 0.0);
      L.insert(L.begin(), global ? 0.0 : -unit);
      H.insert(H.begin(), unit);
    }
    if (global && t.back() < 1.0) {
      tt.push_back(1.0);
      L.push_back(-inf);
      H.push_back(1.0);
    }
    double lo = -inf, hi = inf;
    const std::size_t k = tt.size();
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        for (std::size_t c = b + 1; c < k; ++c) {
          const double wa = 1.0 / ((tt[a] - tt[b]) * (tt[a] - tt[c]));
          const double wb = 1.0 / ((tt[b] - tt[a]) * (tt[b] - tt[c]));
          const double wc = 1.0 / ((tt[c] - tt[a]) * (tt[c] - tt[b]));
          const double up = wa * H[a] + wb * L[b] + wc * H[c];
          const double down = wa * L[a] + wb * H[b] + wc * L[c];
          if (!std::isnan(up)) hi = std::min(hi, up);
          if (!std::isnan(down)) lo = std::max(lo, down);
        }
      }
    }
    if (!(lo <= hi)) return out;
    const double first = std::max(global ? 0.0 : -top, std::floor(std::ldexp(lo, cbits)));
    const double last = std::min(top, std::ceil(std::ldexp(hi, cbits)));
    const double centre = std::clamp(base[2], first, last);
    for (int i = 0; i < 2 * kCurvatureCandidates; ++i) {
      const double v = centre + (i % 2 == 0 ? i / 2 : -(i / 2 + 1));
      if (v >= first && v <= last) out.push_back({v});
    }
    return out;
  }
  for (const auto& offset : search_offsets(degree - 1)) {
    std::vector<double> v(degree - 1);
    for (std::size_t j = 0; j + 1 < degree; ++j) v[j] = base[j + 2] + offset[j];
    out.push_back(std::move(v));
  }
  return out;
}

// Pieces up to this many samples get the exact slope range from all sample
// pairs; longer ones search near the least-squares slope.
constexpr std::size_t kExactSlopeSamples = 64;
constexpr int kSlopeCandidates = 64;

// Quantized polynomial of degree `degree` whose rounded samples reproduce
// q on [s, e), or nullopt. Coefficients of degree two and up are searched on
// the 2^-cbits lattice around the least-squares fit. Every sample then
// confines a0 + a1 t to its rounding interval [L, H), which fixes the range
// of lattice slopes and, per slope, of constant terms.
std::optional<std::vector<double>> fit_piece(const QuantizedSignal& q,
                                            std::size_t s, std::size_t e,
                                            std::size_t degree, int cbits,
                                            PolyBasis basis) {
  const std::size_t n = q.size();
  const Resolution m = q.resolution();
  const bool global = basis == PolyBasis::kGlobalUnsigned;
  const double origin = global ? 0.0 : static_cast<double>(s);
  const std::size_t len = e - s;
  std::vector<double> t(len);
  for (std::size_t r = 0; r < len; ++r) {
    t[r] = (static_cast<double>(s + r) - origin) / static_cast<double>(n);
  }
  std::vector<double> base(degree + 1, 0.0);
  if (degree > 0) {
    const auto rows = static_cast<Eigen::Index>(len);
    Eigen::MatrixXd V(rows, static_cast<Eigen::Index>(degree + 1));
    Eigen::VectorXd b(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
      double p = 1.0;
      for (Eigen::Index c = 0; c < V.cols(); ++c, p *= t[static_cast<std::size_t>(r)]) V(r, c) = p;
      b[r] = q.value(s + static_cast<std::size_t>(r));
    }
    const Eigen::VectorXd a = V.colPivHouseholderQr().solve(b);
    for (std::size_t j = 1; j <= degree; ++j) {
      base[j] = std::round(std::ldexp(a[static_cast<Eigen::Index>(j)], cbits));
    }
  }
  const double top = std::ldexp(1.0, cbits) - 1.0;
  const double inf = std::numeric_limits<double>::infinity();
  const double half = std::ldexp(0.5, -m.bits());
  auto allowed = [&](double i) { return std::abs(i) <= top && !(global && i < 0.0); };

  std::vector<double> coeffs(degree + 1, 0.0);
  std::vector<double> L(len), H(len);
  auto exact = [&] {
    if (global) {
      double sum = 0.0;
      for (double c : coeffs) sum += c;
      if (!(sum < 1.0)) return false;
    }
    for (std::size_t r = 0; r < len; ++r) {
      if (round_to_index(horner(coeffs, t[r]), m) != q.index(s + r)) return false;
    }
    return true;
  };
  // Smallest lattice constant inside every interval, given a1.
  auto try_constant = [&](double a1) {
    double lo = -inf, hi = inf;
    for (std::size_t r = 0; r < len; ++r) {
      lo = std::max(lo, L[r] - a1 * t[r]);
      hi = std::min(hi, H[r] - a1 * t[r]);
    }
    if (!(lo < hi)) return false;
    double first = std::isfinite(lo) ? std::ceil(std::ldexp(lo, cbits)) : -top;
    if (global) first = std::max(first, 0.0);
    for (double i0 = first - 1.0; i0 <= first + 1.0; i0 += 1.0) {
      if (!allowed(i0)) continue;
      coeffs[0] = std::ldexp(i0, -cbits);
      if (exact()) return true;
    }
    return false;
  };

  for (const auto& high : high_candidates(q, s, t, degree, cbits, global, base)) {
    bool in_range = true;
    for (std::size_t j = 2; j <= degree && in_range; ++j) {
      in_range = allowed(high[j - 2]);
      coeffs[j] = std::ldexp(high[j - 2], -cbits);
    }
    if (!in_range) continue;
    for (std::size_t r = 0; r < len; ++r) {
      double rest = 0.0;
      for (std::size_t j = degree; j >= 2; --j) rest = (rest + coeffs[j]) * t[r];
      rest *= t[r];
      const double v = q.value(s + r);
      L[r] = q.index(s + r) > 0 ? v - half - rest : -inf;
      H[r] = q.index(s + r) < m.max_index() ? v + half - rest : inf;
    }
    if (degree == 0) {
      if (try_constant(0.0)) return coeffs;
      continue;
    }
    double slope_lo = global ? 0.0 : -top, slope_hi = top;
    if (len <= kExactSlopeSamples) {
      // The coefficient limits act as two more samples: a0 = p(0) lies in
      // the coefficient range and, for the global basis, p(1) < 1.
      std::vector<double> tt = t, LL = L, HH = H;
      const double unit = std::ldexp(top, -cbits);
      tt.push_back(0.0);
      LL.push_back((global ? 0.0 : -unit) - 0.0);
      HH.push_back(unit + std::ldexp(1.0, -cbits - 1));
      if (global) {
        double rest = 0.0;
        for (std::size_t j = 2; j <= degree; ++j) rest += coeffs[j];
        tt.push_back(1.0);
        LL.push_back(-inf);
        HH.push_back(1.0 - rest);
      }
      double lo = -inf, hi = inf;
      for (std::size_t i = 0; i < tt.size(); ++i) {
        for (std::size_t j = 0; j < tt.size(); ++j) {
          const double dt = tt[i] - tt[j];
          if (!(dt > 0.0)) continue;
          lo = std::max(lo, (LL[i] - HH[j]) / dt);
          hi = std::min(hi, (HH[i] - LL[j]) / dt);
        }
      }
      if (!(lo <= hi)) continue;
      slope_lo = std::max(slope_lo, std::floor(std::ldexp(lo, cbits)));
      slope_hi = std::min(slope_hi, std::ceil(std::ldexp(hi, cbits)));
    } else {
      slope_lo = std::max(slope_lo, base[1] - 8.0);
      slope_hi = std::min(slope_hi, base[1] + 8.0);
    }
    const double centre = std::clamp(base[1], slope_lo, slope_hi);
    for (int k = 0; k < 2 * kSlopeCandidates; ++k) {
      const double i1 = centre + (k % 2 == 0 ? k / 2 : -(k / 2 + 1));
      if (i1 < slope_lo || i1 > slope_hi || !allowed(i1)) continue;
      coeffs[1] = std::ldexp(i1, -cbits);
      if (try_constant(coeffs[1])) return coeffs;
    }
  }
  return std::nullopt;
}

}  // namespace

// Cheapest segmentation with at most max_q_ + 1 pieces. A polynomial that
// fits [s, e) also fits every [s, e') with e' < e, so per start and degree
// only the longest fit is needed; a dynamic program over (pieces, end)
// then picks the breakpoints. Greedy longest-first is not enough in the
// local basis, where moving a start re-expands the polynomial.
std::optional<std::vector<PolySegment>> PiecewisePolyCoder::fit(
    const QuantizedSignal& q, std::size_t declared) const {
  const std::size_t n = q.size();
  const int cbits = coefficient_bits(q.resolution(), declared);
  const std::size_t coeff_cost =
      static_cast<std::size_t>(cbits) + (basis_ == PolyBasis::kLocalSigned ? 1 : 0);
  const std::size_t field = static_cast<std::size_t>(degree_field_bits(declared));
  const std::size_t bp_bits = static_cast<std::size_t>(ceil_log2(n));

  struct Reach {
    std::size_t end = 0;
    std::vector<double> coeffs;
  };
  std::vector<std::vector<Reach>> reach(n, std::vector<Reach>(declared + 1));
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t d = 0; d <= declared; ++d) {
      Reach& r = reach[s][d];
      r.end = s;
      // A lower degree never reaches further than a higher one, and in the
      // global basis a piece from s - 1 still fits from s.
      if (d > 0 && reach[s][d - 1].end > r.end) {
        r.end = reach[s][d - 1].end;
        r.coeffs = reach[s][d - 1].coeffs;
        r.coeffs.resize(d + 1, 0.0);
      }
      if (basis_ == PolyBasis::kGlobalUnsigned && s > 0 && reach[s - 1][d].end > r.end) {
        r.end = reach[s - 1][d].end;
        r.coeffs = reach[s - 1][d].coeffs;
      }
      const std::size_t from = r.end;
      for (std::size_t e = from + 1; e <= n; ++e) {
        // Keep the current polynomial while it still reproduces the new
        // sample; search again only when it does not.
        if (!r.coeffs.empty()) {
          const double origin = basis_ == PolyBasis::kGlobalUnsigned ? 0.0 : double(s);
          const double t = (double(e - 1) - origin) / double(n);
          if (round_to_index(horner(r.coeffs, t), q.resolution()) == q.index(e - 1)) {
            r.end = e;
            continue;
          }
        }
        auto piece = fit_piece(q, s, e, d, cbits, basis_);
        if (!piece) break;
        r.end = e;
        r.coeffs = std::move(*piece);
      }
    }
  }

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  struct Step {
    std::size_t bits = kNone;
    std::size_t from = 0;
    std::size_t degree = 0;
  };
  const std::size_t pieces = std::min(max_q_ + 1, n);
  std::vector<std::vector<Step>> best(pieces + 1, std::vector<Step>(n + 1));
  best[0][0].bits = 0;
  for (std::size_t c = 0; c < pieces; ++c) {
    for (std::size_t s = 0; s < n; ++s) {
      if (best[c][s].bits == kNone) continue;
      for (std::size_t d = 0; d <= declared; ++d) {
        const std::size_t cost =
            best[c][s].bits + (c > 0 ? bp_bits : 0) + field + (d + 1) * coeff_cost;
        for (std::size_t e = s + 1; e <= reach[s][d].end; ++e) {
          Step& to = best[c + 1][e];
          if (cost < to.bits) to = {cost, s, d};
        }
      }
    }
  }
  std::size_t used = 0;
  for (std::size_t c = 1; c <= pieces; ++c) {
    if (best[c][n].bits != kNone && (used == 0 || best[c][n].bits < best[used][n].bits)) {
      used = c;
    }
  }
  if (used == 0) return std::nullopt;
  std::vector<PolySegment> segments(used);
  for (std::size_t c = used, e = n; c > 0; --c) {
    const Step& st = best[c][e];
    segments[c - 1] = {st.from, reach[st.from][st.degree].coeffs};
    e = st.from;
  }
  return segments;
}

std::optional<BitString> PiecewisePolyCoder::try_encode(
    const QuantizedSignal& q) const {
  const std::size_t n = q.size();
  std::optional<BitString> best;
  for (std::size_t declared = 0; declared <= max_n_; ++declared) {
    const auto segments = fit(q, declared);
    if (!segments) continue;
    BitString out;
    out.write_uint(static_cast<std::uint64_t>(id()), kTagBits);
    write_segments(out, *segments,
                   {n, q.resolution(), declared,
                    coefficient_bits(q.resolution(), declared)},
                   basis_);
    if (!best || out.size() < best->size()) best = std::move(out);
  }
  return best;
}

std::size_t encode_piecewise_poly(const std::vector<PolySegment>& segments,
                                  std::size_t n, Resolution m) {
  std::size_t degree = 0;
  for (const auto& seg : segments) {
    degree = std::max(degree, seg.coeffs.empty() ? 0 : seg.coeffs.size() - 1);
  }
  const PiecewisePolyCoder coder(segments.empty() ? 0 : segments.size() - 1,
                                 degree);
  return coder.encode_segments(segments, n, m).size();
}

}  // namespace mcp
