#include "omw/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "omw/errors.hpp"

namespace omw {

LatticePoint LatticePoint::canonicalized() const {
  LatticePoint p = *this;
  const long long m = *std::min_element(p.x.begin(), p.x.end());
  for (auto& v : p.x) v -= m;
  return p;
}

long long LatticePoint::coord(int axis) const {
  if (axis < 1 || axis > 4) throw usage_error("axis out of range 1..4");
  return x[static_cast<std::size_t>(axis - 1)];
}

std::string LatticePoint::to_string() const {
  std::ostringstream os;
  const LatticePoint p = canonicalized();
  os << "(" << p.x[0] << "," << p.x[1] << "," << p.x[2] << "," << p.x[3] << ")";
  return os.str();
}

nlohmann::json LatticePoint::to_json() const {
  const LatticePoint p = canonicalized();
  return nlohmann::json::array({p.x[0], p.x[1], p.x[2], p.x[3]});
}

bool in_Q(const LatticePoint& p, int N) {
  if (N < 0) throw usage_error("N must be nonnegative");
  std::array<long long, 4> s = p.x;
  std::sort(s.begin(), s.end());
  for (int i = 0; i < 3; ++i)
    if (s[static_cast<std::size_t>(i) + 1] - s[static_cast<std::size_t>(i)] > N)
      return false;
  return true;
}

bool in_Qstar(const LatticePoint& p, int N) {
  if (!in_Q(p, N)) return false;
  const auto [lo, hi] = std::minmax_element(p.x.begin(), p.x.end());
  return *hi - *lo <= N;
}

std::vector<LatticePoint> enumerate_Qstar(int N) {
  if (N < 0) throw usage_error("N must be nonnegative");
  std::vector<LatticePoint> out;
  LatticePoint p;
  for (long long a = 0; a <= N; ++a)
    for (long long b = 0; b <= N; ++b)
      for (long long c = 0; c <= N; ++c)
        for (long long d = 0; d <= N; ++d) {
          if (std::min(std::min(a, b), std::min(c, d)) != 0) continue;
          p.x = {a, b, c, d};
          out.push_back(p);
        }
  return out;
}

long long r_size(const LatticePoint& p, int axis, Sign dir, int N) {
  if (dir == Sign::zero) throw usage_error("run direction must be + or -");
  const LatticePoint c = p.canonicalized();
  if (!in_Qstar(c, N)) throw usage_error("run base point must lie in Q*");
  long long mn = 0, mx = 0;
  bool first = true;
  for (int a = 1; a <= 4; ++a) {
    if (a == axis) continue;
    const long long v = c.coord(a);
    if (first) {
      mn = mx = v;
      first = false;
    } else {
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
  }
  const long long room = dir == Sign::plus ? N - c.coord(axis) + mn
                                           : N + c.coord(axis) - mx;
  return std::max(0LL, room);
}

std::vector<LatticePoint> r_members(const LatticePoint& p, int axis, Sign dir,
                                    int N) {
  const long long n = r_size(p, axis, dir, N);
  const LatticePoint c = p.canonicalized();
  std::vector<LatticePoint> out;
  out.reserve(static_cast<std::size_t>(n));
  const long long step = dir == Sign::plus ? 1 : -1;
  for (long long k = 1; k <= n; ++k) {
    LatticePoint y = c;
    y.x[static_cast<std::size_t>(axis - 1)] += step * k;
    out.push_back(y.canonicalized());
  }
  return out;
}

CyclicTriple gamma_of_point(const ConstructionInstance& inst,
                            const LatticePoint& p) {
  if (!in_Q(p, inst.N)) throw usage_error("point lies outside Q");
  GroupElement prod;
  for (const PairIJ& pr : axis_pairs()) {
    const long long r = p.diff(pr.i, pr.j);
    if (std::llabs(r) > inst.N) continue;  // wall absent: identity factor
    prod = prod.compose(
        inst.g_element(element_index(inst.N, pr.i, pr.j, r)));
  }
  return apply_group(prod, CyclicTriple(1, 2, 3));
}

Sign beta(int i, int j, int k, long long r, long long s, long long t,
          const ConstructionInstance& inst) {
  CyclicTriple gamma(i, j, k);  // validates distinctness
  const int l = gamma.missing();
  int sum = 0;
  const std::array<std::array<long long, 3>, 3> legs = {
      {{i, j, r}, {j, k, s}, {k, i, t}}};
  for (const auto& leg : legs) {
    const int a = static_cast<int>(leg[0]);
    const int b = static_cast<int>(leg[1]);
    const int e = element_index(inst.N, a, b, leg[2]);  // throws when absent
    const int alpha = a < b ? 1 : -1;
    sum += alpha * delta_coord(inst.u[static_cast<std::size_t>(e)], l);
  }
  if (sum == 0)
    throw verification_error("wall-sign sum of three odd terms vanished");
  return sign_of_int(sum);
}

Sign beta_axis(const ConstructionInstance& inst, const LatticePoint& p,
               int l) {
  const CyclicTriple gamma = gamma_of_point(inst, p);
  std::array<int, 3> subset;
  int n = 0;
  for (int a = 1; a <= 4; ++a)
    if (a != l) subset[static_cast<std::size_t>(n++)] = a;
  const CyclicTriple o = orientation_of(gamma, subset);
  const auto& t = o.rep();
  return beta(t[0], t[1], t[2], p.diff(t[0], t[1]), p.diff(t[1], t[2]),
              p.diff(t[2], t[0]), inst);
}

namespace {

// Dense index over canonical Q★ representatives.
struct QstarIndex {
  int N;
  std::vector<std::int32_t> slot;  // (N+1)^4 codes → position or −1

  explicit QstarIndex(int n, const std::vector<LatticePoint>& pts) : N(n) {
    std::size_t span = 1;
    for (int i = 0; i < 4; ++i) span *= static_cast<std::size_t>(N) + 1;
    slot.assign(span, -1);
    for (std::size_t i = 0; i < pts.size(); ++i)
      slot[code(pts[i])] = static_cast<std::int32_t>(i);
  }

  std::size_t code(const LatticePoint& p) const {
    std::size_t c = 0;
    for (int i = 0; i < 4; ++i) {
      const long long v = p.x[static_cast<std::size_t>(i)];
      c = c * (static_cast<std::size_t>(N) + 1) + static_cast<std::size_t>(v);
    }
    return c;
  }

  int find(const LatticePoint& p) const {
    const LatticePoint c = p.canonicalized();
    for (long long v : c.x)
      if (v < 0 || v > N) return -1;
    return slot[code(c)];
  }
};

struct PointFacts {
  CyclicTriple gamma{1, 2, 3};
  bool in_omega = false;
};

// The six wall-sign conditions at x for class (ijk), paired per wall through
// the spare axis l: each wall pins two coordinates of its tilt vector.
std::array<bool, 6> six_conditions(const ConstructionInstance& inst,
                                   const LatticePoint& p,
                                   const std::array<int, 3>& triple, int l,
                                   const std::array<Sign, 4>& beta_by_axis) {
  const int i = triple[0], j = triple[1], k = triple[2];
  const auto bi = beta_by_axis[static_cast<std::size_t>(i - 1)];
  const auto bj = beta_by_axis[static_cast<std::size_t>(j - 1)];
  const auto bk = beta_by_axis[static_cast<std::size_t>(k - 1)];
  auto cond = [&](int a, int b, int coord, Sign want) {
    const int e = element_index(inst.N, a, b, p.diff(a, b));
    const int alpha = a < b ? 1 : -1;
    const int val =
        alpha * delta_coord(inst.u[static_cast<std::size_t>(e)], coord);
    return sign_of_int(val) == want;
  };
  return {cond(i, l, j, bj), cond(l, i, k, bk), cond(j, l, k, bk),
          cond(l, j, i, bi), cond(k, l, i, bi), cond(l, k, j, bj)};
}

OmegaCertificate make_certificate(const ConstructionInstance& inst,
                                  const LatticePoint& p) {
  OmegaCertificate cert;
  cert.x = p.canonicalized();
  cert.gamma = gamma_of_point(inst, p);
  for (int a = 1; a <= 4; ++a) {
    cert.beta_by_axis[static_cast<std::size_t>(a - 1)] =
        beta_axis(inst, p, a);
    cert.r_plus[static_cast<std::size_t>(a - 1)] =
        r_size(p, a, Sign::plus, inst.N);
    cert.r_minus[static_cast<std::size_t>(a - 1)] =
        r_size(p, a, Sign::minus, inst.N);
  }
  cert.sign_conditions = six_conditions(inst, p, cert.gamma.rep(),
                                        cert.gamma.missing(),
                                        cert.beta_by_axis);
  return cert;
}

bool certificate_in_omega(const OmegaCertificate& cert, int N) {
  for (int t = 0; t < 3; ++t) {
    const int axis = cert.gamma.rep()[static_cast<std::size_t>(t)];
    const Sign dir = cert.beta_by_axis[static_cast<std::size_t>(axis - 1)];
    const long long run = dir == Sign::plus
                              ? cert.r_plus[static_cast<std::size_t>(axis - 1)]
                              : cert.r_minus[static_cast<std::size_t>(axis - 1)];
    if (2 * run < N) return false;  // exact comparison with N/2
  }
  for (bool c : cert.sign_conditions)
    if (!c) return false;
  return true;
}

}  // namespace

bool omega_member(const ConstructionInstance& inst, const LatticePoint& p) {
  if (!in_Qstar(p, inst.N)) return false;
  return certificate_in_omega(make_certificate(inst, p), inst.N);
}

std::vector<OmegaCertificate> omega_set(const ConstructionInstance& inst) {
  const int N = inst.N;
  const std::vector<LatticePoint> points = enumerate_Qstar(N);
  const QstarIndex index(N, points);

  // Pass 1: class and membership for every point of Q★.
  std::vector<PointFacts> facts(points.size());
  std::vector<OmegaCertificate> certs;
  std::vector<std::size_t> cert_of(points.size(), SIZE_MAX);
  for (std::size_t i = 0; i < points.size(); ++i) {
    OmegaCertificate cert = make_certificate(inst, points[i]);
    facts[i].gamma = cert.gamma;
    facts[i].in_omega = certificate_in_omega(cert, N);
    if (facts[i].in_omega) {
      cert_of[i] = certs.size();
      certs.push_back(std::move(cert));
    }
  }

  // Pass 2: onward sets, now that membership of every candidate is known.
  for (OmegaCertificate& cert : certs) {
    const auto& t = cert.gamma.rep();
    const int l = cert.gamma.missing();
    // Required classes for the runs off axes i, j, k respectively.
    const std::array<CyclicTriple, 3> want = {
        CyclicTriple(t[1], t[2], l), CyclicTriple(t[2], t[0], l),
        CyclicTriple(t[0], t[1], l)};
    for (int s = 0; s < 3; ++s) {
      const int axis = t[static_cast<std::size_t>(s)];
      const Sign dir = cert.beta_by_axis[static_cast<std::size_t>(axis - 1)];
      for (const LatticePoint& y : r_members(cert.x, axis, dir, N)) {
        const int yi = index.find(y);
        if (yi < 0) continue;
        if (!facts[static_cast<std::size_t>(yi)].in_omega) continue;
        if (facts[static_cast<std::size_t>(yi)].gamma !=
            want[static_cast<std::size_t>(s)])
          continue;
        cert.s_sets[static_cast<std::size_t>(s)].push_back(y);
      }
    }
  }
  return certs;
}

nlohmann::json OmegaCertificate::to_json() const {
  nlohmann::json j;
  j["x"] = x.to_json();
  j["gamma"] = gamma.to_string();
  nlohmann::json betas = nlohmann::json::object();
  nlohmann::json rp = nlohmann::json::array();
  nlohmann::json rm = nlohmann::json::array();
  for (int a = 0; a < 4; ++a) {
    betas[std::to_string(a + 1)] =
        std::string(1, to_char(beta_by_axis[static_cast<std::size_t>(a)]));
    rp.push_back(r_plus[static_cast<std::size_t>(a)]);
    rm.push_back(r_minus[static_cast<std::size_t>(a)]);
  }
  j["beta"] = std::move(betas);
  j["r_plus"] = std::move(rp);
  j["r_minus"] = std::move(rm);
  nlohmann::json conds = nlohmann::json::array();
  for (bool c : sign_conditions) conds.push_back(c);
  j["conditions"] = std::move(conds);
  nlohmann::json ss = nlohmann::json::array();
  for (const auto& set : s_sets) {
    nlohmann::json members = nlohmann::json::array();
    for (const LatticePoint& y : set) members.push_back(y.to_json());
    ss.push_back(std::move(members));
  }
  j["s_sets"] = std::move(ss);
  return j;
}

}  // namespace omw
