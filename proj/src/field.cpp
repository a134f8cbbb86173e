#include "fflab/field.hpp"

#include <stdexcept>
#include <string>

namespace fflab {

namespace detail {

struct FieldData {
  std::uint32_t p = 0;
  std::uint32_t nu = 0;
  std::uint32_t q = 0;
  std::vector<std::uint32_t> modulus;
  // nu > 1 only: discrete log / antilog w.r.t. a primitive element. exp_table
  // has length 2(q-1) so products index it without a reduction.
  std::vector<Elem> exp_table;
  std::vector<std::uint32_t> log_table;
  std::vector<Elem> inv_table;
  std::vector<std::uint32_t> pow_p;  // p^i, i < nu
};

}  // namespace detail

namespace {

using Coeffs = std::vector<std::uint32_t>;

void trim(Coeffs& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

// Remainder of a by monic b over F_p.
Coeffs rem_monic(Coeffs a, const Coeffs& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - lead) * b[i]) % p);
    }
    trim(a);
  }
  return a;
}

bool irreducible_by_trial_division(const Coeffs& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    Coeffs g(d + 1, 0);
    g[d] = 1;
    for (std::uint64_t code = 0; code < count; ++code) {
      std::uint64_t c = code;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      if (rem_monic(f, g, p).empty()) return false;
    }
  }
  return true;
}

Coeffs first_irreducible(std::uint32_t p, std::uint32_t nu) {
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < nu; ++i) count *= p;
  Coeffs f(nu + 1, 0);
  f[nu] = 1;
  // code enumerates (c_0, ..., c_{nu-1}) with c_0 the most significant digit.
  for (std::uint64_t code = 0; code < count; ++code) {
    std::uint64_t c = code;
    for (std::uint32_t i = 0; i < nu; ++i) {
      f[nu - 1 - i] = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
    if (f[0] == 0) continue;
    if (irreducible_by_trial_division(f, p)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");
}

Coeffs decode(Elem code, const detail::FieldData& d) {
  Coeffs out(d.nu);
  for (std::uint32_t i = 0; i < d.nu; ++i) {
    out[i] = code % d.p;
    code /= d.p;
  }
  return out;
}

Elem encode(const Coeffs& digits, const detail::FieldData& d) {
  Elem code = 0;
  for (std::size_t i = digits.size(); i-- > 0;) code = code * d.p + digits[i];
  return code;
}

// Slow product used only while building the log tables.
Elem slow_mul(Elem a, Elem b, const detail::FieldData& d) {
  const Coeffs x = decode(a, d);
  const Coeffs y = decode(b, d);
  Coeffs prod(2 * d.nu, 0);
  for (std::uint32_t i = 0; i < d.nu; ++i) {
    for (std::uint32_t j = 0; j < d.nu; ++j) {
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{x[i]} * y[j]) % d.p);
    }
  }
  Coeffs r = rem_monic(prod, d.modulus, d.p);
  r.resize(d.nu, 0);
  return encode(r, d);
}

void build_log_tables(detail::FieldData& d) {
  const std::uint32_t order = d.q - 1;
  for (Elem g = 2; g < d.q; ++g) {
    std::vector<Elem> powers;
    powers.reserve(order);
    Elem x = 1;
    bool primitive = true;
    for (std::uint32_t k = 0; k < order; ++k) {
      if (k > 0 && x == 1) {
        primitive = false;
        break;
      }
      powers.push_back(x);
      x = slow_mul(x, g, d);
    }
    if (!primitive || x != 1) continue;
    d.exp_table.resize(2 * static_cast<std::size_t>(order));
    d.log_table.assign(d.q, 0);
    for (std::uint32_t k = 0; k < order; ++k) {
      d.exp_table[k] = powers[k];
      d.exp_table[k + order] = powers[k];
      d.log_table[powers[k]] = k;
    }
    return;
  }
  throw std::logic_error("no primitive element found");
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t integer_totient(std::uint64_t n) {
  std::uint64_t result = n;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    while (n % d == 0) n /= d;
    result -= result / d;
  }
  if (n > 1) result -= result / n;
  return result;
}

Field Field::make(std::uint32_t p, std::uint32_t nu) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
  if (nu == 0) throw std::invalid_argument("extension degree must be at least 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < nu; ++i) {
    q *= p;
    if (q > kMaxFieldOrder) {
      throw std::invalid_argument("field order exceeds bound " + std::to_string(kMaxFieldOrder));
    }
  }
  auto d = std::make_shared<detail::FieldData>();
  d->p = p;
  d->nu = nu;
  d->q = static_cast<std::uint32_t>(q);
  d->pow_p.resize(nu);
  std::uint32_t pw = 1;
  for (std::uint32_t i = 0; i < nu; ++i) {
    d->pow_p[i] = pw;
    pw *= p;
  }
  if (nu > 1) {
    d->modulus = first_irreducible(p, nu);
    build_log_tables(*d);
  }
  d->inv_table.assign(d->q, 0);
  Field field(d);
  for (Elem a = 1; a < d->q; ++a) {
    d->inv_table[a] = field.pow(a, d->q - 2);
  }
  return field;
}

std::uint32_t Field::p() const { return data_->p; }
std::uint32_t Field::nu() const { return data_->nu; }
std::uint32_t Field::q() const { return data_->q; }
std::span<const std::uint32_t> Field::modulus() const { return data_->modulus; }

Elem Field::add(Elem a, Elem b) const {
  const auto& d = *data_;
  if (d.nu == 1) {
    const Elem s = a + b;
    return s >= d.p ? s - d.p : s;
  }
  if (d.p == 2) return a ^ b;
  Elem out = 0;
  for (std::uint32_t i = 0; i < d.nu; ++i) {
    const std::uint32_t da = (a / d.pow_p[i]) % d.p;
    const std::uint32_t db = (b / d.pow_p[i]) % d.p;
    const std::uint32_t s = da + db;
    out += (s >= d.p ? s - d.p : s) * d.pow_p[i];
  }
  return out;
}

Elem Field::neg(Elem a) const {
  const auto& d = *data_;
  if (d.nu == 1) return a == 0 ? 0 : d.p - a;
  if (d.p == 2) return a;
  Elem out = 0;
  for (std::uint32_t i = 0; i < d.nu; ++i) {
    const std::uint32_t da = (a / d.pow_p[i]) % d.p;
    out += (da == 0 ? 0 : d.p - da) * d.pow_p[i];
  }
  return out;
}

Elem Field::sub(Elem a, Elem b) const { return add(a, neg(b)); }

Elem Field::mul(Elem a, Elem b) const {
  const auto& d = *data_;
  if (d.nu == 1) return static_cast<Elem>((std::uint64_t{a} * b) % d.p);
  if (a == 0 || b == 0) return 0;
  return d.exp_table[d.log_table[a] + d.log_table[b]];
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw std::domain_error("inverse of zero field element");
  if (!data_->inv_table.empty() && data_->inv_table[a] != 0) return data_->inv_table[a];
  return pow(a, data_->q - 2);
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  Elem result = 1;
  Elem base = a;
  while (e != 0) {
    if (e & 1U) result = mul(result, base);
    e >>= 1U;
    if (e != 0) base = mul(base, base);
  }
  return result;
}

std::vector<std::uint32_t> Field::components(Elem a) const { return decode(a, *data_); }

Elem Field::from_components(std::span<const std::uint32_t> digits) const {
  if (digits.size() != data_->nu) throw std::invalid_argument("component vector has wrong length");
  for (auto c : digits) {
    if (c >= data_->p) throw std::invalid_argument("component out of range");
  }
  return encode(Coeffs(digits.begin(), digits.end()), *data_);
}

FieldElem Field::elem(Elem code) const { return FieldElem(*this, code); }
FieldElem Field::zero() const { return FieldElem(*this, 0); }
FieldElem Field::one() const { return FieldElem(*this, 1); }

bool operator==(const Field& a, const Field& b) {
  return a.data_ == b.data_ || (a.p() == b.p() && a.nu() == b.nu());
}

FieldElem::FieldElem(Field field, Elem code) : field_(std::move(field)), code_(code) {
  if (code_ >= field_.q()) throw std::invalid_argument("element code out of range");
}

namespace {
const Field& common_field(const FieldElem& a, const FieldElem& b) {
  if (!(a.field() == b.field())) throw std::invalid_argument("field elements belong to different fields");
  return a.field();
}
}  // namespace

FieldElem FieldElem::inv() const { return FieldElem(field_, field_.inv(code_)); }
FieldElem FieldElem::pow(std::uint64_t e) const { return FieldElem(field_, field_.pow(code_, e)); }

FieldElem operator+(const FieldElem& a, const FieldElem& b) {
  const Field& f = common_field(a, b);
  return FieldElem(f, f.add(a.code_, b.code_));
}
FieldElem operator-(const FieldElem& a, const FieldElem& b) {
  const Field& f = common_field(a, b);
  return FieldElem(f, f.sub(a.code_, b.code_));
}
FieldElem operator*(const FieldElem& a, const FieldElem& b) {
  const Field& f = common_field(a, b);
  return FieldElem(f, f.mul(a.code_, b.code_));
}
FieldElem operator/(const FieldElem& a, const FieldElem& b) {
  const Field& f = common_field(a, b);
  return FieldElem(f, f.mul(a.code_, f.inv(b.code_)));
}
FieldElem operator-(const FieldElem& a) { return FieldElem(a.field_, a.field_.neg(a.code_)); }
bool operator==(const FieldElem& a, const FieldElem& b) {
  return a.field_ == b.field_ && a.code_ == b.code_;
}

}  // namespace fflab
