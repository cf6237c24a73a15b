#include "qhopf/algebra.hpp"

#include <algorithm>
#include <mutex>
#include <set>

namespace qhopf {

namespace {

template <typename Key>
using Accumulator = std::map<Key, std::vector<ExpPoly>>;

template <typename Key>
std::map<Key, ExpPoly> collapse(Accumulator<Key>& acc) {
  std::map<Key, ExpPoly> out;
  for (auto& [key, parts] : acc) {
    ExpPoly f = ExpPoly::sum(parts);
    if (!f.empty()) out.emplace(key, std::move(f));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// AlgebraElement

AlgebraElement AlgebraElement::identity() { return function(ExpPoly::constant(1, 1.0)); }

AlgebraElement AlgebraElement::annihilation() { return monomial(0, ExpPoly::constant(1, 1.0), 1); }

AlgebraElement AlgebraElement::creation() { return monomial(1, ExpPoly::constant(1, 1.0), 0); }

AlgebraElement AlgebraElement::number() { return function(ExpPoly::variable(1, 0)); }

AlgebraElement AlgebraElement::function(const ExpPoly& f) { return monomial(0, f, 0); }

AlgebraElement AlgebraElement::monomial(int r, const ExpPoly& f, int s) {
  if (r < 0 || s < 0) throw std::invalid_argument("monomial exponents must be nonnegative");
  if (f.arity() != 1) throw std::invalid_argument("algebra coefficients must have arity 1");
  AlgebraElement x;
  x.add_term({r, s}, f);
  return x;
}

void AlgebraElement::add_term(LegKey key, const ExpPoly& f) {
  if (f.arity() != 1) throw std::invalid_argument("algebra coefficients must have arity 1");
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    if (!f.empty()) terms_.emplace(key, f);
    return;
  }
  it->second += f;
  if (it->second.empty()) terms_.erase(it);
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  for (const auto& [key, f] : other.terms_) add_term(key, f);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  for (const auto& [key, f] : other.terms_) add_term(key, -f);
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(cplx s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, f] : terms_) f *= s;
  return *this;
}

int AlgebraElement::max_shift() const {
  int m = 0;
  for (const auto& [key, f] : terms_) m = std::max({m, key.r, key.s});
  return m;
}

// ---------------------------------------------------------------------------
// TensorElement

TensorElement::TensorElement(int legs) : legs_(legs) {
  if (legs != 2 && legs != 3) throw std::invalid_argument("tensor elements have 2 or 3 legs");
}

TensorElement TensorElement::tensor(const AlgebraElement& x, const AlgebraElement& y) {
  TensorElement t(2);
  for (const auto& [kx, fx] : x.terms())
    for (const auto& [ky, fy] : y.terms()) t.add_term({kx, ky, LegKey{}}, lift(fx, 2, 0) * lift(fy, 2, 1));
  return t;
}

TensorElement TensorElement::tensor(const TensorElement& t, const AlgebraElement& y) {
  if (t.legs() != 2) throw std::invalid_argument("tensor(t, y) needs a 2-leg t");
  TensorElement out(3);
  for (const auto& [kt, ft] : t.terms()) {
    const ExpPoly head = relabel(ft, 3, {0, 1});
    for (const auto& [ky, fy] : y.terms()) out.add_term({kt[0], kt[1], ky}, head * lift(fy, 3, 2));
  }
  return out;
}

TensorElement TensorElement::tensor(const AlgebraElement& x, const TensorElement& t) {
  if (t.legs() != 2) throw std::invalid_argument("tensor(x, t) needs a 2-leg t");
  TensorElement out(3);
  for (const auto& [kt, ft] : t.terms()) {
    const ExpPoly tail = relabel(ft, 3, {1, 2});
    for (const auto& [kx, fx] : x.terms()) out.add_term({kx, kt[0], kt[1]}, lift(fx, 3, 0) * tail);
  }
  return out;
}

void TensorElement::add_term(const Key& key, const ExpPoly& f) {
  if (f.arity() != legs_) throw std::invalid_argument("tensor coefficient arity must equal leg count");
  Key k = key;
  for (int l = legs_; l < 3; ++l) k[l] = LegKey{};
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    if (!f.empty()) terms_.emplace(k, f);
    return;
  }
  it->second += f;
  if (it->second.empty()) terms_.erase(it);
}

TensorElement& TensorElement::operator+=(const TensorElement& other) {
  if (other.legs_ != legs_) throw std::invalid_argument("leg count mismatch");
  for (const auto& [key, f] : other.terms_) add_term(key, f);
  return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& other) {
  if (other.legs_ != legs_) throw std::invalid_argument("leg count mismatch");
  for (const auto& [key, f] : other.terms_) add_term(key, -f);
  return *this;
}

TensorElement& TensorElement::operator*=(cplx s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, f] : terms_) f *= s;
  return *this;
}

TensorElement TensorElement::twisted() const {
  if (legs_ != 2) throw std::invalid_argument("twist is defined for 2 legs");
  TensorElement out(2);
  for (const auto& [key, f] : terms_) out.add_term({key[1], key[0], LegKey{}}, relabel(f, 2, {1, 0}));
  return out;
}

std::optional<int> TensorElement::degree() const {
  std::optional<int> d;
  for (const auto& [key, f] : terms_) {
    int k = 0;
    for (int l = 0; l < legs_; ++l) k += key[l].degree();
    if (d && *d != k) return std::nullopt;
    d = k;
  }
  return d.value_or(0);
}

int TensorElement::max_shift() const {
  int m = 0;
  for (const auto& [key, f] : terms_)
    for (int l = 0; l < legs_; ++l) m = std::max({m, key[l].r, key[l].s});
  return m;
}

// ---------------------------------------------------------------------------
// Residuals

double residual(const AlgebraElement& x, const AlgebraElement& y) {
  std::set<LegKey> keys;
  for (const auto& [k, f] : x.terms()) keys.insert(k);
  for (const auto& [k, f] : y.terms()) keys.insert(k);
  const ExpPoly zero(1);
  double worst = 0.0;
  for (const auto& k : keys) {
    const auto ix = x.terms().find(k);
    const auto iy = y.terms().find(k);
    const ExpPoly& fx = ix == x.terms().end() ? zero : ix->second;
    const ExpPoly& fy = iy == y.terms().end() ? zero : iy->second;
    worst = std::max(worst, residual(fx, fy));
  }
  return worst;
}

double residual(const TensorElement& x, const TensorElement& y) {
  if (x.legs() != y.legs()) throw std::invalid_argument("leg count mismatch");
  std::set<TensorElement::Key> keys;
  for (const auto& [k, f] : x.terms()) keys.insert(k);
  for (const auto& [k, f] : y.terms()) keys.insert(k);
  const ExpPoly zero(x.legs());
  double worst = 0.0;
  for (const auto& k : keys) {
    const auto ix = x.terms().find(k);
    const auto iy = y.terms().find(k);
    const ExpPoly& fx = ix == x.terms().end() ? zero : ix->second;
    const ExpPoly& fy = iy == y.terms().end() ? zero : iy->second;
    worst = std::max(worst, residual(fx, fy));
  }
  return worst;
}

ExpPoly factor_of(const Term& term, int var) {
  return ExpPoly::monomial(1, 0, term.key[var].mu, term.key[var].power);
}

// ---------------------------------------------------------------------------
// Algebra

struct Algebra::Cache {
  std::recursive_mutex mutex;
  std::map<std::pair<int, int>, std::vector<ExpPoly>> reorder;
  std::vector<ExpPoly> shifted_sums;  // S_m(N) = sum_{i<m} G(N+i)
};

Algebra::Algebra(ExpPoly g) : g_(std::move(g)), cache_(std::make_shared<Cache>()) {
  if (g_.arity() != 1) throw std::invalid_argument("structure function G must have arity 1");
}

const std::vector<ExpPoly>& Algebra::reorder(int s, int r) const {
  std::lock_guard lock(cache_->mutex);
  const auto found = cache_->reorder.find({s, r});
  if (found != cache_->reorder.end()) return found->second;

  std::vector<ExpPoly> h;
  if (s == 0 || r == 0) {
    h.push_back(ExpPoly::constant(1, 1.0));
  } else {
    auto& sums = cache_->shifted_sums;
    if (sums.empty()) sums.push_back(ExpPoly::zero(1));
    while (static_cast<int>(sums.size()) <= r)
      sums.push_back(sums.back() + shift(g_, 0, static_cast<double>(sums.size() - 1)));

    // a . (a^dag)^m h(N) a^t = (a^dag)^m h(N+1) a^{t+1} + (a^dag)^{m-1} S_m(N) h(N) a^t
    const std::vector<ExpPoly> prev = reorder(s - 1, r);
    const int top = std::min(r, s);
    std::vector<std::vector<ExpPoly>> parts(top + 1);
    for (int j = 0; j < static_cast<int>(prev.size()); ++j) {
      const int m = r - j;
      parts[j].push_back(shift(prev[j], 0, 1.0));
      if (m >= 1 && j + 1 <= top) parts[j + 1].push_back(sums[m] * prev[j]);
    }
    for (auto& p : parts) h.push_back(p.empty() ? ExpPoly::zero(1) : ExpPoly::sum(p));
  }
  return cache_->reorder.emplace(std::make_pair(s, r), std::move(h)).first->second;
}

std::vector<Algebra::Piece> Algebra::monomial_product(LegKey x, const ExpPoly& f, LegKey y,
                                                      const ExpPoly& g) const {
  const std::vector<ExpPoly>& h = reorder(x.s, y.r);
  std::vector<Piece> out;
  out.reserve(h.size());
  for (int j = 0; j < static_cast<int>(h.size()); ++j) {
    if (h[j].empty()) continue;
    ExpPoly coeff = shift(f, 0, static_cast<double>(y.r - j)) * h[j] * shift(g, 0, static_cast<double>(x.s - j));
    if (coeff.empty()) continue;
    out.push_back({LegKey{x.r + y.r - j, x.s - j + y.s}, std::move(coeff)});
  }
  return out;
}

AlgebraElement Algebra::multiply(const AlgebraElement& x, const AlgebraElement& y) const {
  Accumulator<LegKey> acc;
  for (const auto& [kx, fx] : x.terms())
    for (const auto& [ky, fy] : y.terms())
      for (auto& piece : monomial_product(kx, fx, ky, fy)) acc[piece.key].push_back(std::move(piece.f));
  AlgebraElement out;
  for (auto& [key, f] : collapse(acc)) out.add_term(key, f);
  return out;
}

TensorElement Algebra::multiply(const TensorElement& x, const TensorElement& y) const {
  if (x.legs() != y.legs()) throw std::invalid_argument("leg count mismatch in tensor product");
  const int legs = x.legs();
  Accumulator<TensorElement::Key> acc;

  for (const auto& [kx, fx] : x.terms()) {
    for (const auto& [ky, fy] : y.terms()) {
      // Coefficients are sums of separable terms; multiply leg by leg.
      for (const Term& tx : fx.terms()) {
        for (const Term& ty : fy.terms()) {
          std::array<std::vector<Piece>, 3> per_leg;
          bool vanished = false;
          for (int l = 0; l < legs && !vanished; ++l) {
            per_leg[l] = monomial_product(kx[l], factor_of(tx, l), ky[l], factor_of(ty, l));
            vanished = per_leg[l].empty();
          }
          if (vanished) continue;
          const cplx c = tx.coeff * ty.coeff;
          std::array<std::size_t, 3> idx{0, 0, 0};
          while (true) {
            TensorElement::Key key{};
            ExpPoly coeff = ExpPoly::constant(legs, c);
            for (int l = 0; l < legs; ++l) {
              const Piece& p = per_leg[l][idx[l]];
              key[l] = p.key;
              coeff = coeff * lift(p.f, legs, l);
            }
            acc[key].push_back(std::move(coeff));
            int l = legs - 1;
            while (l >= 0 && ++idx[l] == per_leg[l].size()) idx[l--] = 0;
            if (l < 0) break;
          }
        }
      }
    }
  }
  TensorElement out(legs);
  for (auto& [key, f] : collapse(acc)) out.add_term(key, f);
  return out;
}

AlgebraElement Algebra::power(const AlgebraElement& x, int n) const {
  if (n < 0) throw std::invalid_argument("negative power");
  AlgebraElement out = AlgebraElement::identity();
  for (int i = 0; i < n; ++i) out = multiply(out, x);
  return out;
}

TensorElement Algebra::power(const TensorElement& x, int n) const {
  if (n < 0) throw std::invalid_argument("negative power");
  TensorElement out(x.legs());
  TensorElement::Key unit{};
  out.add_term(unit, ExpPoly::constant(x.legs(), 1.0));
  for (int i = 0; i < n; ++i) out = multiply(out, x);
  return out;
}

AlgebraElement Algebra::commutator(const AlgebraElement& x, const AlgebraElement& y) const {
  return multiply(x, y) - multiply(y, x);
}

TensorElement Algebra::commutator(const TensorElement& x, const TensorElement& y) const {
  return multiply(x, y) - multiply(y, x);
}

}  // namespace qhopf
