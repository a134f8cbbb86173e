#include "fflab/prime.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fflab {

namespace {

std::vector<unsigned> prime_divisors(unsigned n) {
  std::vector<unsigned> out;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Strips all factors P from f; returns the exponent and leaves the cofactor.
unsigned strip_factor(Poly& f, const Poly& p) {
  unsigned k = 0;
  while (!f.is_constant()) {
    auto [quot, rem] = divrem(f, p);
    if (!rem.is_zero()) break;
    f = std::move(quot);
    ++k;
  }
  return k;
}

unsigned lambda_from_candidate(Poly f, const Poly& p) {
  strip_factor(f, p);
  return f.is_constant() ? static_cast<unsigned>(p.deg()) : 0U;
}

}  // namespace

bool is_irreducible(const Poly& input) {
  if (input.is_zero() || input.is_constant()) {
    throw std::invalid_argument("irreducibility test needs a polynomial of positive degree");
  }
  const Poly f = input.monic();
  const unsigned n = static_cast<unsigned>(f.deg());
  if (n == 1) return true;
  const Field& field = f.field();
  const Poly t = Poly::variable(field) % f;

  // frob[k] = t^(q^k) mod f for k = 0..n.
  std::vector<Poly> frob;
  frob.reserve(n + 1);
  frob.push_back(t);
  for (unsigned k = 1; k <= n; ++k) frob.push_back(powmod(frob.back(), field.q(), f));
  if (!(frob[n] == t)) return false;
  for (unsigned ell : prime_divisors(n)) {
    const Poly g = gcd(frob[n / ell] - t, f);
    if (!g.is_constant()) return false;
  }
  return true;
}

unsigned von_mangoldt(const Poly& input) {
  if (input.is_zero()) throw std::invalid_argument("von Mangoldt of the zero polynomial");
  if (input.is_constant()) return 0;
  const Poly f = input.monic();
  const std::size_t n = f.deg();
  const Field& field = f.field();
  const Poly t = Poly::variable(field);
  Poly frob = t % f;
  for (std::size_t d = 1; 2 * d <= n; ++d) {
    frob = powmod(frob, field.q(), f);
    const Poly g = gcd(frob - t, f);
    if (g.is_constant()) continue;
    // g is the product of the distinct irreducible factors of degree d.
    if (g.deg() != d) return 0;
    return lambda_from_candidate(f, g);
  }
  // No factor of degree <= n/2.
  return static_cast<unsigned>(n);
}

unsigned von_mangoldt_reference(const Poly& input) {
  if (input.is_zero()) throw std::invalid_argument("von Mangoldt of the zero polynomial");
  if (input.is_constant()) return 0;
  const Poly f = input.monic();
  const std::size_t n = f.deg();
  for (std::size_t d = 1; 2 * d <= n; ++d) {
    const std::uint64_t count = checked_pow(f.field().q(), static_cast<unsigned>(d));
    for (std::uint64_t i = 0; i < count; ++i) {
      const Poly p = monic_from_index(f.field(), d, i);
      if ((f % p).is_zero()) return lambda_from_candidate(f, p);  // least-degree divisor is irreducible
    }
  }
  return static_cast<unsigned>(n);
}

int mobius(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("mobius(0)");
  int sign = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    n /= d;
    if (n % d == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

BigInt count_irreducibles(std::uint64_t q, unsigned n) {
  if (n == 0) throw std::invalid_argument("count_irreducibles needs n >= 1");
  BigInt sum = 0;
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const int mu = mobius(d);
    if (mu == 0) continue;
    const BigInt term = pow_big(q, n / d);
    if (mu > 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum / n;
}

// -- IrreducibleTable ------------------------------------------------------------

IrreducibleTable::IrreducibleTable(Field field, unsigned max_degree, std::vector<std::vector<std::uint64_t>> by_degree)
    : field_(std::move(field)), max_degree_(max_degree), by_degree_(std::move(by_degree)) {
  if (by_degree_.size() != max_degree_ + 1U) throw std::invalid_argument("table needs one list per degree");
}

std::size_t IrreducibleTable::count(unsigned d) const { return indices(d).size(); }

std::span<const std::uint64_t> IrreducibleTable::indices(unsigned d) const {
  if (d == 0 || d > max_degree_) throw std::out_of_range("degree outside irreducible table");
  return by_degree_[d];
}

Poly IrreducibleTable::at(unsigned d, std::size_t i) const { return monic_from_index(field_, d, indices(d)[i]); }

std::vector<Poly> IrreducibleTable::polys(unsigned d) const {
  std::vector<Poly> out;
  for (auto idx : indices(d)) out.push_back(monic_from_index(field_, d, idx));
  return out;
}

bool IrreducibleTable::contains(const Poly& f) const {
  if (!f.is_monic() || f.deg() == 0 || f.deg() > max_degree_) return false;
  const auto list = indices(static_cast<unsigned>(f.deg()));
  return std::binary_search(list.begin(), list.end(), monic_index(f));
}

void IrreducibleTable::save(std::ostream& os) const {
  os << "# field p=" << field_.p() << " nu=" << field_.nu() << " D=" << max_degree_ << "\n";
  for (unsigned d = 1; d <= max_degree_; ++d) {
    os << "# degree " << d << " count " << by_degree_[d].size() << "\n";
    for (auto idx : by_degree_[d]) os << format_poly(monic_from_index(field_, d, idx)) << "\n";
  }
}

IrreducibleTable IrreducibleTable::load(std::istream& is, const Field& field) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty sieve cache");
  unsigned p = 0, nu = 0, max_degree = 0;
  if (std::sscanf(line.c_str(), "# field p=%u nu=%u D=%u", &p, &nu, &max_degree) != 3) {
    throw std::runtime_error("bad sieve cache header: " + line);
  }
  if (p != field.p() || nu != field.nu()) throw std::runtime_error("sieve cache is for a different field");
  std::vector<std::vector<std::uint64_t>> by_degree(max_degree + 1);
  for (unsigned d = 1; d <= max_degree; ++d) {
    if (!std::getline(is, line)) throw std::runtime_error("truncated sieve cache");
    unsigned deg = 0;
    unsigned long long count = 0;
    if (std::sscanf(line.c_str(), "# degree %u count %llu", &deg, &count) != 2 || deg != d) {
      throw std::runtime_error("bad sieve cache section: " + line);
    }
    auto& list = by_degree[d];
    list.reserve(count);
    for (unsigned long long i = 0; i < count; ++i) {
      if (!std::getline(is, line)) throw std::runtime_error("truncated sieve cache");
      const Poly f = parse_poly(line, field);
      if (!f.is_monic() || f.deg() != d) throw std::runtime_error("sieve cache entry has wrong degree: " + line);
      list.push_back(monic_index(f));
    }
    if (!std::is_sorted(list.begin(), list.end())) throw std::runtime_error("sieve cache section not sorted");
  }
  return IrreducibleTable(field, max_degree, std::move(by_degree));
}

// -- sieve -----------------------------------------------------------------------

namespace {

// Marks all monic products P*h of degree d, for P of degree e from `primes`.
void mark_products(const Field& field, unsigned d, unsigned e, std::span<const std::uint64_t> primes,
                   std::uint64_t h_begin, std::uint64_t h_end, std::vector<std::uint8_t>& marks) {
  const std::uint64_t q = field.q();
  const unsigned m = d - e;  // degree of h
  std::vector<Elem> pc(e + 1), hc(m + 1), prod(d + 1);
  for (std::uint64_t pidx : primes) {
    std::uint64_t v = pidx;
    for (unsigned i = 0; i < e; ++i) {
      pc[i] = static_cast<Elem>(v % q);
      v /= q;
    }
    pc[e] = 1;
    std::uint64_t hv = h_begin;
    for (unsigned i = 0; i < m; ++i) {
      hc[i] = static_cast<Elem>(hv % q);
      hv /= q;
    }
    hc[m] = 1;
    for (std::uint64_t h = h_begin; h < h_end; ++h) {
      std::fill(prod.begin(), prod.end(), 0);
      for (unsigned i = 0; i <= e; ++i) {
        if (pc[i] == 0) continue;
        for (unsigned j = 0; j <= m; ++j) {
          if (i + j >= d) break;
          prod[i + j] = field.add(prod[i + j], field.mul(pc[i], hc[j]));
        }
      }
      std::uint64_t idx = 0;
      for (unsigned i = d; i-- > 0;) idx = idx * q + prod[i];
      std::atomic_ref<std::uint8_t>(marks[idx]).store(1, std::memory_order_relaxed);
      // odometer over the low m coefficients of h
      for (unsigned i = 0; i < m; ++i) {
        if (++hc[i] < q) break;
        hc[i] = 0;
      }
    }
  }
}

}  // namespace

IrreducibleTable sieve_irreducibles(const Field& field, unsigned max_degree, Parallelism par) {
  if (max_degree == 0) throw std::invalid_argument("sieve needs max degree >= 1");
  const std::uint64_t q = field.q();
  std::uint64_t top = 1;
  for (unsigned i = 0; i < max_degree; ++i) {
    if (top > kSieveBudget / q) throw std::length_error("sieve size q^D exceeds budget");
    top *= q;
  }
  std::vector<std::vector<std::uint64_t>> by_degree(max_degree + 1);
  for (unsigned d = 1; d <= max_degree; ++d) {
    const std::uint64_t total = checked_pow(q, d);
    std::vector<std::uint8_t> marks(total, 0);
    for (unsigned e = 1; 2 * e <= d; ++e) {
      const std::uint64_t h_count = checked_pow(q, d - e);
      const std::size_t blocks = std::max<std::size_t>(1, std::min<std::uint64_t>(h_count, 4 * par.resolved()));
      const std::uint64_t per = (h_count + blocks - 1) / blocks;
      parallel_blocks<int>(blocks, par, [&](std::size_t b) {
        const std::uint64_t lo = b * per;
        const std::uint64_t hi = std::min(h_count, lo + per);
        if (lo < hi) mark_products(field, d, e, by_degree[e], lo, hi, marks);
        return 0;
      });
    }
    auto& list = by_degree[d];
    list.reserve(static_cast<std::size_t>(total / d + 1));
    for (std::uint64_t i = 0; i < total; ++i) {
      if (marks[i] == 0) list.push_back(i);
    }
  }
  return IrreducibleTable(field, max_degree, std::move(by_degree));
}

std::filesystem::path default_cache_dir() {
  if (const char* env = std::getenv("FFLAB_CACHE_DIR"); env != nullptr && *env != '\0') return env;
  return ".cache";
}

IrreducibleTable cached_sieve(const Field& field, unsigned max_degree, const std::filesystem::path& cache_dir,
                              Parallelism par) {
  if (cache_dir.empty()) return sieve_irreducibles(field, max_degree, par);
  const auto path = cache_dir / ("sieve_p" + std::to_string(field.p()) + "_nu" + std::to_string(field.nu()) + "_D" +
                                 std::to_string(max_degree) + ".txt");
  if (std::ifstream in(path); in) {
    try {
      return IrreducibleTable::load(in, field);
    } catch (const std::exception&) {
      // unreadable cache: rebuild below
    }
  }
  IrreducibleTable table = sieve_irreducibles(field, max_degree, par);
  std::error_code ec;
  std::filesystem::create_directories(cache_dir, ec);
  if (!ec) {
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp);
      table.save(out);
    }
    std::filesystem::rename(tmp, path, ec);
  }
  return table;
}

// -- factorisation and totient ------------------------------------------------------

std::vector<PrimeFactor> factor_with_table(const Poly& f, const IrreducibleTable& table) {
  if (f.is_zero()) throw std::invalid_argument("cannot factor the zero polynomial");
  Poly rest = f.monic();
  std::vector<PrimeFactor> out;
  for (unsigned d = 1; !rest.is_constant() && 2 * d <= rest.deg(); ++d) {
    if (d > table.max_degree()) throw std::invalid_argument("irreducible table too small to factor");
    for (auto idx : table.indices(d)) {
      if (2 * d > rest.deg()) break;
      const Poly p = monic_from_index(f.field(), d, idx);
      const unsigned k = strip_factor(rest, p);
      if (k > 0) out.push_back({p, k});
    }
  }
  // What remains has no factor of degree <= deg/2, so it is irreducible.
  if (!rest.is_constant()) out.push_back({rest, 1});
  std::sort(out.begin(), out.end(),
            [](const PrimeFactor& a, const PrimeFactor& b) { return enumeration_less(a.prime, b.prime); });
  return out;
}

std::vector<PrimeFactor> factor(const Poly& f) {
  if (f.is_zero()) throw std::invalid_argument("cannot factor the zero polynomial");
  if (f.is_constant()) return {};
  const unsigned half = static_cast<unsigned>(f.deg() / 2);
  if (half == 0) return {{f.monic(), 1}};
  return factor_with_table(f, sieve_irreducibles(f.field(), half));
}

BigInt totient(const Poly& modulus, const IrreducibleTable& table) {
  if (modulus.is_zero() || modulus.is_constant()) throw std::invalid_argument("totient needs a non-constant modulus");
  const std::uint64_t q = modulus.field().q();
  BigInt phi = 1;
  for (const auto& pf : factor_with_table(modulus, table)) {
    const std::uint64_t d = pf.prime.deg();
    phi *= pow_big(q, pf.multiplicity * d) - pow_big(q, (pf.multiplicity - 1) * d);
  }
  return phi;
}

BigInt totient(const Poly& modulus) {
  if (modulus.is_zero() || modulus.is_constant()) throw std::invalid_argument("totient needs a non-constant modulus");
  const unsigned half = std::max<unsigned>(1, static_cast<unsigned>(modulus.deg() / 2));
  return totient(modulus, sieve_irreducibles(modulus.field(), half));
}

// -- LambdaTable -------------------------------------------------------------------

LambdaTable::LambdaTable(const IrreducibleTable& table, unsigned n) : field_(table.field()), n_(n) {
  if (n == 0) throw std::invalid_argument("Lambda table needs n >= 1");
  if (table.max_degree() < n) throw std::invalid_argument("irreducible table does not reach degree n");
  values_.assign(checked_pow(field_.q(), n), 0);
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const unsigned k = n / d;
    for (auto idx : table.indices(d)) {
      if (k == 1) {
        values_[idx] = static_cast<std::uint8_t>(d);
        continue;
      }
      const Poly p = monic_from_index(field_, d, idx);
      Poly power = p;
      for (unsigned i = 1; i < k; ++i) power = power * p;
      values_[monic_index(power)] = static_cast<std::uint8_t>(d);
    }
  }
}

}  // namespace fflab
