#include "omw/group_action.hpp"

#include <algorithm>
#include <stdexcept>

#include "omw/errors.hpp"

namespace omw {

namespace {

void require_axis(int a) {
  if (a < 1 || a > 4) throw usage_error("axis out of range 1..4");
}

}  // namespace

CyclicTriple::CyclicTriple(int a, int b, int c) {
  require_axis(a);
  require_axis(b);
  require_axis(c);
  if (a == b || b == c || a == c)
    throw usage_error("cyclic triple needs three distinct axes");
  std::array<int, 3> raw = {a, b, c};
  // Rotate so the smallest axis leads; rotation preserves the class.
  int lead = 0;
  for (int i = 1; i < 3; ++i)
    if (raw[i] < raw[lead]) lead = i;
  for (int i = 0; i < 3; ++i) t_[i] = raw[(lead + i) % 3];
}

int CyclicTriple::missing() const {
  int sum = t_[0] + t_[1] + t_[2];
  return 10 - sum;  // axes sum to 1+2+3+4 = 10
}

bool CyclicTriple::contains(int axis) const {
  return t_[0] == axis || t_[1] == axis || t_[2] == axis;
}

CyclicTriple CyclicTriple::reversed() const {
  return CyclicTriple(t_[2], t_[1], t_[0]);
}

std::array<std::array<int, 3>, 3> CyclicTriple::rotations() const {
  std::array<std::array<int, 3>, 3> out;
  for (int r = 0; r < 3; ++r)
    for (int i = 0; i < 3; ++i) out[r][i] = t_[(r + i) % 3];
  return out;
}

std::string CyclicTriple::to_string() const {
  std::string s = "(";
  for (int i = 0; i < 3; ++i) s += static_cast<char>('0' + t_[i]);
  s += ")";
  return s;
}

CyclicTriple CyclicTriple::parse(const std::string& text) {
  std::string digits;
  for (char c : text)
    if (c >= '1' && c <= '4') digits += c;
  if (digits.size() != 3)
    throw usage_error("cannot parse cyclic triple from '" + text + "'");
  return CyclicTriple(digits[0] - '0', digits[1] - '0', digits[2] - '0');
}

const std::vector<CyclicTriple>& CyclicTriple::all_classes() {
  static const std::vector<CyclicTriple> classes = [] {
    std::vector<CyclicTriple> out;
    for (int a = 1; a <= 4; ++a)
      for (int b = a + 1; b <= 4; ++b)
        for (int c = b + 1; c <= 4; ++c) {
          out.emplace_back(a, b, c);
          out.emplace_back(a, c, b);
        }
    return out;
  }();
  return classes;
}

int CyclicTriple::class_index() const {
  const auto& all = all_classes();
  for (size_t i = 0; i < all.size(); ++i)
    if (all[i] == *this) return static_cast<int>(i);
  throw std::logic_error("cyclic triple missing from class table");
}

CyclicTriple orientation_of(const CyclicTriple& gamma,
                            const std::array<int, 3>& subset) {
  std::array<int, 3> s = subset;
  std::sort(s.begin(), s.end());
  if (s[0] == s[1] || s[1] == s[2])
    throw usage_error("orientation subset needs three distinct axes");
  for (int a : s) require_axis(a);
  const int l = gamma.missing();
  bool has_l = (s[0] == l || s[1] == l || s[2] == l);
  if (!has_l) return gamma;  // the class orients its own triple by itself
  // Subset = {p, q, l} with {p, q} two consecutive axes of the cycle; rotate
  // the representative so the pair leads, then append l.
  const auto& t = gamma.rep();
  for (int r = 0; r < 3; ++r) {
    int p = t[r], q = t[(r + 1) % 3];
    bool match = ((s[0] == p || s[1] == p || s[2] == p) &&
                  (s[0] == q || s[1] == q || s[2] == q));
    if (match) return CyclicTriple(p, q, l);
  }
  throw std::logic_error("orientation subset resolution failed");
}

CyclicTriple pi_action(int a, int b, const CyclicTriple& gamma) {
  require_axis(a);
  require_axis(b);
  if (a == b) throw usage_error("pair action needs two distinct axes");
  const int l = gamma.missing();
  const auto& t = gamma.rep();
  if (a == l || b == l) {
    // One endpoint is the missing axis: substitute it for the other, keeping
    // the remaining two axes in their cyclic order ending at the swapped slot.
    int p = (a == l) ? b : a;  // the endpoint inside the triple
    for (int r = 0; r < 3; ++r)
      if (t[(r + 2) % 3] == p)  // rotate so p sits last
        return CyclicTriple(t[r], t[(r + 1) % 3], l);
    throw std::logic_error("pair action: axis not found in triple");
  }
  // Both endpoints in the triple: exactly one of a→b, b→a is a cycle edge.
  for (int r = 0; r < 3; ++r) {
    int x = t[r], y = t[(r + 1) % 3];
    if ((x == a && y == b) || (x == b && y == a))
      return CyclicTriple(y, x, l);  // reverse the edge, close with l
  }
  throw std::logic_error("pair action: edge not found in cycle");
}

GroupElement group_generator(int a, int b) {
  require_axis(a);
  require_axis(b);
  if (a == b) throw usage_error("pair generator needs two distinct axes");
  GroupElement g;
  for (int m = 1; m <= 4; ++m)
    if (m != a && m != b) g.bits |= 1u << (m - 1);  // subset w/o m has both
  return g;
}

unsigned orientation_signature(const CyclicTriple& gamma) {
  unsigned sig = 0;
  for (int m = 1; m <= 4; ++m) {
    std::array<int, 3> subset;
    int k = 0;
    for (int a = 1; a <= 4; ++a)
      if (a != m) subset[k++] = a;
    CyclicTriple o = orientation_of(gamma, subset);
    // Reference orientation is the ascending one; the only other class on
    // this subset is its reversal.
    CyclicTriple ref(subset[0], subset[1], subset[2]);
    if (o == ref) continue;
    if (o != ref.reversed())
      throw std::logic_error("orientation landed outside the subset");
    sig |= 1u << (m - 1);
  }
  return sig;
}

CyclicTriple class_from_signature(unsigned sig) {
  for (const auto& g : CyclicTriple::all_classes())
    if (orientation_signature(g) == sig) return g;
  throw usage_error("no orientation class has the requested signature");
}

CyclicTriple apply_group(const GroupElement& g, const CyclicTriple& gamma) {
  return class_from_signature(orientation_signature(gamma) ^ g.bits);
}

GroupCheckReport group_properties_check() {
  GroupCheckReport rep;
  auto fail = [&rep](const std::string& msg) {
    rep.ok = false;
    rep.failures.push_back(msg);
  };
  const auto& classes = CyclicTriple::all_classes();

  // Signatures must separate the 8 classes (the Z₂⁴ embedding is faithful).
  {
    std::vector<unsigned> sigs;
    for (const auto& g : classes) sigs.push_back(orientation_signature(g));
    std::sort(sigs.begin(), sigs.end());
    if (std::unique(sigs.begin(), sigs.end()) != sigs.end())
      fail("orientation signatures do not separate the classes");
  }

  // The 12 per-axis generator instances are involutions.
  for (int l = 1; l <= 4; ++l)
    for (int i = 1; i <= 4; ++i) {
      if (i == l) continue;
      for (const auto& g : classes) {
        CyclicTriple twice = pi_action(i, l, pi_action(i, l, g));
        if (twice != g)
          fail("generator (" + std::to_string(i) + "," + std::to_string(l) +
               ") is not an involution at " + g.to_string());
      }
    }

  // All pair generators commute.
  std::vector<std::array<int, 2>> pairs;
  for (int a = 1; a <= 4; ++a)
    for (int b = a + 1; b <= 4; ++b) pairs.push_back({a, b});
  for (const auto& p : pairs)
    for (const auto& q : pairs)
      for (const auto& g : classes) {
        CyclicTriple pq = pi_action(p[0], p[1], pi_action(q[0], q[1], g));
        CyclicTriple qp = pi_action(q[0], q[1], pi_action(p[0], p[1], g));
        if (pq != qp)
          fail("generators for (" + std::to_string(p[0]) +
               std::to_string(p[1]) + ") and (" + std::to_string(q[0]) +
               std::to_string(q[1]) + ") do not commute at " + g.to_string());
      }

  // The orbit of (123) under all pair generators is the full set of classes.
  {
    std::vector<int> seen(classes.size(), 0);
    std::vector<CyclicTriple> frontier = {CyclicTriple(1, 2, 3)};
    seen[frontier[0].class_index()] = 1;
    while (!frontier.empty()) {
      CyclicTriple cur = frontier.back();
      frontier.pop_back();
      for (const auto& p : pairs) {
        CyclicTriple nxt = pi_action(p[0], p[1], cur);
        if (!seen[nxt.class_index()]) {
          seen[nxt.class_index()] = 1;
          frontier.push_back(nxt);
        }
      }
    }
    for (size_t i = 0; i < classes.size(); ++i)
      if (!seen[i])
        fail("orbit of (123) misses " + classes[i].to_string());
  }

  // For each oriented triangle (the 8 orientation choices over the 4
  // subsets), the classes inducing it form a size-4 orbit of the subgroup
  // generated by the pairs through the subset's missing axis.
  for (int l = 1; l <= 4; ++l) {
    std::array<int, 3> subset;
    int k = 0;
    for (int a = 1; a <= 4; ++a)
      if (a != l) subset[k++] = a;
    for (int orient = 0; orient < 2; ++orient) {
      CyclicTriple target = orient == 0
                                ? CyclicTriple(subset[0], subset[1], subset[2])
                                : CyclicTriple(subset[0], subset[2], subset[1]);
      std::vector<CyclicTriple> members;
      for (const auto& g : classes)
        if (orientation_of(g, subset) == target) members.push_back(g);
      if (members.size() != 4) {
        fail("oriented triangle " + target.to_string() + " fixed by " +
             std::to_string(members.size()) + " classes, want 4");
        continue;
      }
      // Orbit of the first member under generators through l.
      std::vector<int> seen(classes.size(), 0);
      std::vector<CyclicTriple> frontier = {members[0]};
      seen[members[0].class_index()] = 1;
      size_t reached = 1;
      while (!frontier.empty()) {
        CyclicTriple cur = frontier.back();
        frontier.pop_back();
        for (int i = 1; i <= 4; ++i) {
          if (i == l) continue;
          CyclicTriple nxt = pi_action(i, l, cur);
          if (!seen[nxt.class_index()]) {
            seen[nxt.class_index()] = 1;
            frontier.push_back(nxt);
            ++reached;
          }
        }
      }
      bool orbit_matches = reached == members.size();
      for (const auto& m : members)
        if (!seen[m.class_index()]) orbit_matches = false;
      if (!orbit_matches)
        fail("classes fixing " + target.to_string() +
             " are not one orbit of the pairs through axis " +
             std::to_string(l));
    }
  }

  // The bit patterns agree with the action: the generator for {a,b} flips
  // the orientation exactly on subsets containing both endpoints, and the
  // XOR model reproduces the action itself.
  for (const auto& p : pairs) {
    GroupElement gen = group_generator(p[0], p[1]);
    for (const auto& g : classes) {
      CyclicTriple moved = pi_action(p[0], p[1], g);
      if (apply_group(gen, g) != moved)
        fail("bit model disagrees with the action for pair (" +
             std::to_string(p[0]) + "," + std::to_string(p[1]) + ") at " +
             g.to_string());
      for (int m = 1; m <= 4; ++m) {
        std::array<int, 3> subset;
        int k = 0;
        for (int a = 1; a <= 4; ++a)
          if (a != m) subset[k++] = a;
        bool has_both = (m != p[0] && m != p[1]);
        CyclicTriple before = orientation_of(g, subset);
        CyclicTriple after = orientation_of(moved, subset);
        bool flipped = (after == before.reversed());
        bool kept = (after == before);
        if (has_both ? !flipped : !kept)
          fail("orientation flip pattern wrong for pair (" +
               std::to_string(p[0]) + "," + std::to_string(p[1]) +
               ") at " + g.to_string() + " subset missing " +
               std::to_string(m));
      }
    }
  }

  return rep;
}

}  // namespace omw
