#include "fflab/poly.hpp"

#include "fflab/exact.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace fflab {

std::size_t Degree::value() const {
  if (!value_) throw std::domain_error("degree of the zero polynomial");
  return *value_;
}

namespace {

void require_same_field(const Poly& a, const Poly& b) {
  if (!(a.field() == b.field())) throw std::invalid_argument("polynomials over different fields");
}

}  // namespace

Poly::Poly(Field field) : field_(std::move(field)) {}

Poly::Poly(Field field, std::vector<Elem> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  for (Elem c : coeffs_) {
    if (c >= field_.q()) throw std::invalid_argument("coefficient out of range for field");
  }
  normalize();
}

void Poly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Poly Poly::constant(Field field, Elem c) { return Poly(std::move(field), std::vector<Elem>{c}); }

Poly Poly::monomial(Field field, Elem c, std::size_t k) {
  std::vector<Elem> v(k + 1, 0);
  v[k] = c;
  return Poly(std::move(field), std::move(v));
}

Poly Poly::variable(Field field) { return monomial(std::move(field), 1, 1); }

Degree Poly::degree() const {
  if (coeffs_.empty()) return Degree::minus_infinity();
  return Degree(coeffs_.size() - 1);
}

Poly Poly::monic() const {
  if (is_zero() || is_monic()) return *this;
  return scaled(field_.inv(leading()));
}

Poly Poly::scaled(Elem c) const {
  Poly out(field_);
  if (c == 0) return out;
  out.coeffs_.resize(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = field_.mul(coeffs_[i], c);
  out.normalize();
  return out;
}

Poly operator+(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const Field& f = a.field_;
  Poly out(f);
  out.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] = f.add(a[i], b[i]);
  out.normalize();
  return out;
}

Poly operator-(const Poly& a) {
  Poly out(a.field_);
  out.coeffs_.resize(a.coeffs_.size());
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out.coeffs_[i] = a.field_.neg(a.coeffs_[i]);
  return out;
}

Poly operator-(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const Field& f = a.field_;
  Poly out(f);
  out.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] = f.sub(a[i], b[i]);
  out.normalize();
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const Field& f = a.field_;
  Poly out(f);
  if (a.is_zero() || b.is_zero()) return out;
  out.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      out.coeffs_[i + j] = f.add(out.coeffs_[i + j], f.mul(a.coeffs_[i], b.coeffs_[j]));
    }
  }
  out.normalize();
  return out;
}

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  const Field& f = a.field();
  if (a.degree() < b.degree()) return {Poly(f), a};
  std::vector<Elem> rem(a.coeffs().begin(), a.coeffs().end());
  const std::size_t db = b.deg();
  const std::size_t dq = a.deg() - db;
  std::vector<Elem> quot(dq + 1, 0);
  const Elem lead_inv = f.inv(b.leading());
  const auto bc = b.coeffs();
  for (std::size_t k = dq + 1; k-- > 0;) {
    const Elem c = f.mul(rem[k + db], lead_inv);
    quot[k] = c;
    if (c == 0) continue;
    for (std::size_t i = 0; i <= db; ++i) rem[k + i] = f.sub(rem[k + i], f.mul(c, bc[i]));
  }
  rem.resize(db);
  return {Poly(f, std::move(quot)), Poly(f, std::move(rem))};
}

Poly operator/(const Poly& a, const Poly& b) { return divrem(a, b).first; }
Poly operator%(const Poly& a, const Poly& b) { return divrem(a, b).second; }

bool operator==(const Poly& a, const Poly& b) { return a.field_ == b.field_ && a.coeffs_ == b.coeffs_; }

Poly gcd(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  Poly x = a;
  Poly y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

Poly powmod(const Poly& base, std::uint64_t e, const Poly& m) {
  Poly result = Poly::constant(m.field(), 1) % m;
  Poly b = base % m;
  while (e != 0) {
    if (e & 1U) result = (result * b) % m;
    e >>= 1U;
    if (e != 0) b = (b * b) % m;
  }
  return result;
}

bool enumeration_less(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  const auto ac = a.coeffs();
  const auto bc = b.coeffs();
  for (std::size_t i = ac.size(); i-- > 0;) {
    if (ac[i] != bc[i]) return ac[i] < bc[i];
  }
  return false;
}

// -- text format -------------------------------------------------------------

namespace {

std::string format_elem(const Field& field, Elem c) {
  if (field.nu() == 1) return std::to_string(c);
  std::string out;
  const auto digits = field.components(c);
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0) out += '/';
    out += std::to_string(digits[i]);
  }
  return out;
}

std::uint64_t parse_uint(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  if (s.empty()) throw std::invalid_argument("empty coefficient in '" + std::string(whole) + "'");
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("malformed coefficient '" + std::string(s) + "' in '" + std::string(whole) + "'");
  }
  return v;
}

Elem parse_elem(std::string_view token, const Field& field, std::string_view whole) {
  if (token.find('/') == std::string_view::npos) {
    const std::uint64_t v = parse_uint(token, whole);
    const std::uint64_t bound = field.nu() == 1 ? field.q() : field.p();
    if (v >= bound) {
      throw std::invalid_argument("coefficient " + std::to_string(v) + " out of range [0," + std::to_string(bound) +
                                  ") in '" + std::string(whole) + "'");
    }
    return static_cast<Elem>(v);
  }
  if (field.nu() == 1) throw std::invalid_argument("vector coefficient over a prime field: '" + std::string(whole) + "'");
  std::vector<std::uint32_t> digits;
  std::size_t start = 0;
  while (true) {
    const auto slash = token.find('/', start);
    const auto part = token.substr(start, slash == std::string_view::npos ? std::string_view::npos : slash - start);
    const std::uint64_t v = parse_uint(part, whole);
    if (v >= field.p()) {
      throw std::invalid_argument("component " + std::to_string(v) + " out of range in '" + std::string(whole) + "'");
    }
    digits.push_back(static_cast<std::uint32_t>(v));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  if (digits.size() != field.nu()) {
    throw std::invalid_argument("coefficient needs " + std::to_string(field.nu()) + " components in '" +
                                std::string(whole) + "'");
  }
  return field.from_components(digits);
}

}  // namespace

std::string format_poly(const Poly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  const auto c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i > 0) out += ',';
    out += format_elem(f.field(), c[i]);
  }
  return out;
}

Poly parse_poly(std::string_view text, const Field& field) {
  if (text.empty()) throw std::invalid_argument("empty polynomial text");
  std::vector<Elem> coeffs;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto token = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    coeffs.push_back(parse_elem(token, field, text));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return Poly(field, std::move(coeffs));
}

// -- indexing ------------------------------------------------------------------

std::uint64_t residue_index(const Poly& f, std::size_t width) {
  if (f.degree() >= width) throw std::invalid_argument("polynomial too large for residue index");
  const std::uint64_t q = f.field().q();
  std::uint64_t idx = 0;
  for (std::size_t i = width; i-- > 0;) idx = idx * q + f[i];
  return idx;
}

Poly residue_from_index(const Field& field, std::size_t width, std::uint64_t index) {
  std::vector<Elem> c(width);
  const std::uint64_t q = field.q();
  for (std::size_t i = 0; i < width; ++i) {
    c[i] = static_cast<Elem>(index % q);
    index /= q;
  }
  return Poly(field, std::move(c));
}

std::uint64_t monic_index(const Poly& f) {
  if (!f.is_monic()) throw std::invalid_argument("monic_index of a non-monic polynomial");
  const std::size_t n = f.deg();
  const std::uint64_t q = f.field().q();
  std::uint64_t idx = 0;
  for (std::size_t i = n; i-- > 0;) idx = idx * q + f[i];
  return idx;
}

Poly monic_from_index(const Field& field, std::size_t n, std::uint64_t index) {
  std::vector<Elem> c(n + 1);
  const std::uint64_t q = field.q();
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = static_cast<Elem>(index % q);
    index /= q;
  }
  c[n] = 1;
  return Poly(field, std::move(c));
}

// -- MonicRange ----------------------------------------------------------------

MonicRange MonicRange::all(Field field, std::size_t n) {
  MonicRange r(std::move(field), n);
  r.free_degree_ = n;
  r.end_ = checked_pow(r.field_.q(), static_cast<unsigned>(n));
  return r;
}

MonicRange MonicRange::congruent_or_empty(Field field, std::size_t n, const Poly& modulus, const Poly& residue) {
  if (!(modulus.field() == field) || !(residue.field() == field)) {
    throw std::invalid_argument("residue class over a different field");
  }
  if (modulus.is_zero() || modulus.is_constant()) throw std::invalid_argument("modulus must have positive degree");
  MonicRange r(std::move(field), n);
  r.modulus_ = modulus;
  r.reduced_ = residue % modulus;
  const std::size_t dq = modulus.deg();
  if (n >= dq) {
    r.free_degree_ = n - dq;
    r.end_ = checked_pow(r.field_.q(), static_cast<unsigned>(r.free_degree_));
    return r;
  }
  r.singleton_ = true;
  r.end_ = (r.reduced_->is_monic() && r.reduced_->deg() == n) ? 1 : 0;
  return r;
}

MonicRange MonicRange::congruent(Field field, std::size_t n, const Poly& modulus, const Poly& residue) {
  MonicRange r = congruent_or_empty(std::move(field), n, modulus, residue);
  if (r.singleton_ && r.size() == 0) {
    throw std::invalid_argument("degree below modulus degree and residue is not monic of that degree");
  }
  return r;
}

Poly MonicRange::at(std::uint64_t i) const {
  const std::uint64_t k = begin_ + i;
  if (!modulus_) return monic_from_index(field_, n_, k);
  if (singleton_) return *reduced_;
  return *reduced_ + monic_from_index(field_, free_degree_, k) * *modulus_;
}

std::uint64_t MonicRange::index_at(std::uint64_t i) const {
  if (!modulus_) return begin_ + i;
  return monic_index(at(i));
}

std::vector<MonicRange> MonicRange::split(std::size_t blocks) const {
  std::vector<MonicRange> out;
  const std::uint64_t total = size();
  if (blocks == 0) blocks = 1;
  // Align cut points to multiples of q^(free_degree - h) so each piece fixes
  // the top h coefficients of J.
  const std::uint64_t q = field_.q();
  std::uint64_t granule = 1;
  if (!singleton_) {
    std::size_t h = 0;
    std::uint64_t top = 1;
    while (h < free_degree_ && top < blocks) {
      top *= q;
      ++h;
    }
    granule = checked_pow(q, static_cast<unsigned>(free_degree_ - h));
  }
  const std::uint64_t granules = (total + granule - 1) / granule;
  const std::uint64_t per = std::max<std::uint64_t>(1, (granules + blocks - 1) / blocks);
  for (std::uint64_t g = 0; g < granules; g += per) {
    MonicRange piece = *this;
    piece.begin_ = begin_ + g * granule;
    piece.end_ = std::min(end_, begin_ + (g + per) * granule);
    out.push_back(std::move(piece));
  }
  if (out.empty()) out.push_back(*this);
  return out;
}

// -- IndexShifter ----------------------------------------------------------------

IndexShifter::IndexShifter(const Poly& offset, std::size_t n) {
  if (offset.degree() >= n) throw std::invalid_argument("offset degree must be below n");
  const Field& field = offset.field();
  const std::size_t width = offset.is_zero() ? 0 : offset.deg() + 1;
  const std::uint64_t q = field.q();
  block_ = checked_pow(q, static_cast<unsigned>(width));
  table_.resize(block_);
  std::vector<Elem> digits(width, 0);
  for (std::uint64_t lo = 0; lo < block_; ++lo) {
    std::uint64_t v = lo;
    for (std::size_t i = 0; i < width; ++i) {
      digits[i] = field.add(static_cast<Elem>(v % q), offset[i]);
      v /= q;
    }
    std::uint64_t idx = 0;
    for (std::size_t i = width; i-- > 0;) idx = idx * q + digits[i];
    table_[lo] = idx;
  }
}

}  // namespace fflab
