#include "lw/cyclotomic.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace lw {

namespace {

// Exact division of polynomials over Q (b monic divides a exactly).
std::vector<Rat> poly_exact_div(std::vector<Rat> a, const std::vector<Rat>& b) {
  const long db = static_cast<long>(b.size()) - 1;
  const long da = static_cast<long>(a.size()) - 1;
  if (da < db) throw std::logic_error("poly_exact_div: degree underflow");
  std::vector<Rat> q(da - db + 1, Rat(0));
  for (long j = da; j >= db; --j) {
    Rat coef = a[j] / b[db];
    q[j - db] = coef;
    if (coef != 0)
      for (long i = 0; i <= db; ++i) a[j - db + i] -= coef * b[i];
  }
  for (const Rat& r : a)
    if (r != 0) throw std::logic_error("poly_exact_div: nonzero remainder");
  return q;
}

struct CycTable {
  long phi = 0;
  std::vector<Rat> poly;  // Phi_n, monic, size phi+1
};

std::mutex g_tables_mu;
std::unordered_map<long, CycTable>& tables() {
  static std::unordered_map<long, CycTable> t;
  return t;
}

const CycTable& table_for(long n) {
  std::lock_guard<std::mutex> lock(g_tables_mu);
  auto& t = tables();
  auto it = t.find(n);
  if (it != t.end()) return it->second;

  // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, computed recursively.
  std::vector<Rat> num(n + 1, Rat(0));
  num[0] = Rat(-1);
  num[n] = Rat(1);
  for (long d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    // Recursive fill without re-locking: compute divisors bottom-up; the map
    // is filled in increasing order of d, so Phi_d is present already.
    auto dit = t.find(d);
    if (dit == t.end()) {
      // Build iteratively for all divisors in increasing order.
      std::vector<Rat> nd(d + 1, Rat(0));
      nd[0] = Rat(-1);
      nd[d] = Rat(1);
      for (long dd = 1; dd < d; ++dd)
        if (d % dd == 0) nd = poly_exact_div(std::move(nd), t.at(dd).poly);
      CycTable ct;
      ct.poly = std::move(nd);
      ct.phi = static_cast<long>(ct.poly.size()) - 1;
      dit = t.emplace(d, std::move(ct)).first;
    }
    num = poly_exact_div(std::move(num), dit->second.poly);
  }
  CycTable ct;
  ct.poly = std::move(num);
  ct.phi = static_cast<long>(ct.poly.size()) - 1;
  return t.emplace(n, std::move(ct)).first->second;
}

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

}  // namespace

long euler_phi(long n) { return table_for(n).phi; }

const std::vector<Rat>& cyclotomic_poly(long n) { return table_for(n).poly; }

void Cyc::add_term(long k, const Rat& v) {
  if (v == 0) return;
  k %= n_;
  if (k < 0) k += n_;
  auto it = c_.find(k);
  if (it == c_.end()) {
    c_.emplace(k, v);
  } else {
    it->second += v;
    if (it->second == 0) c_.erase(it);
  }
}

Cyc Cyc::from_rational(const Rat& r) {
  Cyc x;
  x.n_ = 1;
  x.add_term(0, r);
  return x;
}

Cyc Cyc::root(long n, const Int& k) {
  if (n <= 0) throw std::invalid_argument("Cyc::root: modulus must be positive");
  Cyc x;
  x.n_ = n;
  x.add_term(static_cast<long>(mod_pos(k, Int(n))), Rat(1));
  return x;
}

Cyc Cyc::root_of_unity(const Rat& r) {
  Int den = rat_den(r);
  if (den > 1000000) throw std::invalid_argument("root_of_unity: conductor too large");
  long n = den.convert_to<long>();
  return root(n, rat_num(r));
}

Cyc Cyc::from_canonical(long n, const std::vector<Rat>& coeffs) {
  if (static_cast<long>(coeffs.size()) != euler_phi(n))
    throw std::invalid_argument("from_canonical: wrong coefficient count");
  Cyc x;
  x.n_ = n;
  for (long i = 0; i < static_cast<long>(coeffs.size()); ++i) x.add_term(i, coeffs[i]);
  return x;
}

Cyc Cyc::lifted_to(long m) const {
  if (m % n_ != 0) throw std::invalid_argument("lifted_to: modulus must be a multiple");
  long s = m / n_;
  Cyc x;
  x.n_ = m;
  for (const auto& [k, v] : c_) x.add_term(k * s, v);
  return x;
}

Cyc Cyc::operator+(const Cyc& o) const {
  long m = lcm_long(n_, o.n_);
  Cyc a = (n_ == m) ? *this : lifted_to(m);
  Cyc b = (o.n_ == m) ? o : o.lifted_to(m);
  for (const auto& [k, v] : b.c_) a.add_term(k, v);
  return a;
}

Cyc Cyc::operator-() const {
  Cyc x;
  x.n_ = n_;
  for (const auto& [k, v] : c_) x.c_.emplace(k, -v);
  return x;
}

Cyc Cyc::operator-(const Cyc& o) const { return *this + (-o); }

Cyc Cyc::operator*(const Cyc& o) const {
  long m = lcm_long(n_, o.n_);
  Cyc a = (n_ == m) ? *this : lifted_to(m);
  Cyc b = (o.n_ == m) ? o : o.lifted_to(m);
  Cyc x;
  x.n_ = m;
  for (const auto& [ka, va] : a.c_)
    for (const auto& [kb, vb] : b.c_) x.add_term(ka + kb, va * vb);
  return x;
}

Cyc Cyc::scaled(const Rat& r) const {
  if (r == 0) { Cyc z; z.n_ = n_; return z; }
  Cyc x;
  x.n_ = n_;
  for (const auto& [k, v] : c_) x.c_.emplace(k, v * r);
  return x;
}

Cyc Cyc::conj() const {
  Cyc x;
  x.n_ = n_;
  for (const auto& [k, v] : c_) x.add_term(n_ - k, v);
  return x;
}

std::vector<Rat> Cyc::canonical_coeffs() const {
  const CycTable& ct = table_for(n_);
  std::vector<Rat> a(n_, Rat(0));
  for (const auto& [k, v] : c_) a[k] = v;
  // Reduce modulo the monic Phi_n.
  for (long j = n_ - 1; j >= ct.phi; --j) {
    if (a[j] == 0) continue;
    Rat coef = a[j];
    a[j] = 0;
    for (long i = 0; i < ct.phi; ++i) a[j - ct.phi + i] -= coef * ct.poly[i];
  }
  a.resize(ct.phi);
  return a;
}

bool Cyc::is_zero() const {
  if (c_.empty()) return true;
  for (const Rat& r : canonical_coeffs())
    if (r != 0) return false;
  return true;
}

bool Cyc::operator==(const Cyc& o) const { return (*this - o).is_zero(); }

std::optional<Rat> Cyc::as_rational() const {
  std::vector<Rat> a = canonical_coeffs();
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i] != 0) return std::nullopt;
  return a.empty() ? Rat(0) : a[0];
}

Cyc Cyc::inverse() const {
  // Extended Euclid of the canonical representative against Phi_n over Q.
  const CycTable& ct = table_for(n_);
  std::vector<Rat> r0 = ct.poly;
  std::vector<Rat> r1 = canonical_coeffs();
  while (!r1.empty() && r1.back() == 0) r1.pop_back();
  if (r1.empty()) throw std::domain_error("Cyc::inverse: zero");
  std::vector<Rat> s0 = {};           // coefficient of "this" for r0
  std::vector<Rat> s1 = {Rat(1)};     // ... for r1
  auto deg = [](const std::vector<Rat>& p) { return static_cast<long>(p.size()) - 1; };
  auto trim = [](std::vector<Rat>& p) { while (!p.empty() && p.back() == 0) p.pop_back(); };
  while (deg(r1) > 0) {
    // r0 = q * r1 + r2
    std::vector<Rat> q(deg(r0) - deg(r1) + 1, Rat(0));
    std::vector<Rat> rem = r0;
    for (long j = deg(rem); j >= deg(r1); --j) {
      if (rem[j] == 0) continue;
      Rat coef = rem[j] / r1.back();
      q[j - deg(r1)] = coef;
      for (long i = 0; i <= deg(r1); ++i) rem[j - deg(r1) + i] -= coef * r1[i];
    }
    trim(rem);
    // s2 = s0 - q * s1
    std::vector<Rat> s2 = s0;
    s2.resize(std::max(s2.size(), q.size() + s1.size()), Rat(0));
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = 0; j < s1.size(); ++j) s2[i + j] -= q[i] * s1[j];
    trim(s2);
    r0 = std::move(r1); r1 = std::move(rem);
    s0 = std::move(s1); s1 = std::move(s2);
    if (r1.empty()) throw std::logic_error("Cyc::inverse: unexpected zero remainder");
  }
  // r1 is a nonzero constant c; inverse = s1 / c.
  Rat c = r1[0];
  Cyc x;
  x.n_ = n_;
  for (std::size_t i = 0; i < s1.size(); ++i) x.add_term(static_cast<long>(i), s1[i] / c);
  return x;
}

std::string Cyc::to_string() const {
  std::vector<Rat> a = canonical_coeffs();
  std::ostringstream os;
  os << "Cyc(N=" << n_ << ";";
  bool first = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    if (!first) os << " + ";
    os << rat_to_string(a[i]) << "*z^" << i;
    first = false;
  }
  if (first) os << "0";
  os << ")";
  return os.str();
}

}  // namespace lw
