#include "advnet/galois.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

namespace advnet::gf {
namespace {

bool is_prime(uint32_t p) {
  if (p < 2) return false;
  for (uint32_t d = 2; static_cast<uint64_t>(d) * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// ---------------------------------------------------------------------------
// GF(2)[x] on packed 64-bit words.  Construction-time only: irreducibility
// testing and the default-modulus search, for degrees well past the 64-bit
// element limit (code-parameter derivation wants m in the hundreds).

using Poly2 = std::vector<uint64_t>;

int deg2(const Poly2& a) {
  for (int w = static_cast<int>(a.size()) - 1; w >= 0; --w)
    if (a[w]) return w * 64 + 63 - __builtin_clzll(a[w]);
  return -1;
}

// a ^= b << s
void xorshift2(Poly2& a, const Poly2& b, int s) {
  const int ws = s / 64, bs = s % 64;
  const size_t need = b.size() + ws + 1;
  if (a.size() < need) a.resize(need, 0);
  for (size_t i = 0; i < b.size(); ++i) {
    a[i + ws] ^= b[i] << bs;
    if (bs) a[i + ws + 1] ^= b[i] >> (64 - bs);
  }
}

void mod2(Poly2& a, const Poly2& f) {
  const int df = deg2(f);
  for (int da = deg2(a); da >= df; da = deg2(a)) xorshift2(a, f, da - df);
}

Poly2 mulmod2(const Poly2& a, const Poly2& b, const Poly2& f) {
  Poly2 r;
  for (size_t w = 0; w < a.size(); ++w) {
    uint64_t bits = a[w];
    while (bits) {
      const int i = __builtin_ctzll(bits);
      bits &= bits - 1;
      xorshift2(r, b, static_cast<int>(w * 64 + i));
    }
  }
  mod2(r, f);
  return r;
}

Poly2 gcd2(Poly2 a, Poly2 b) {
  while (deg2(b) >= 0) {
    mod2(a, b);
    std::swap(a, b);
  }
  return a;
}

// Irreducibility over GF(2): f of degree m is irreducible iff
// gcd(x^(2^k) - x, f) = 1 for all k <= m/2 and x^(2^m) = x (mod f).
// The x^(2^k) chain is maintained incrementally by squaring.
bool irreducible2(const Poly2& f) {
  const int m = deg2(f);
  if (m < 1) return false;
  if (m == 1) return true;
  const Poly2 x{2};
  Poly2 t = x;
  for (int k = 1; k <= m; ++k) {
    t = mulmod2(t, t, f);
    if (2 * k <= m) {
      Poly2 d = t;
      if (d.empty()) d.resize(1, 0);
      d[0] ^= 2;  // t - x
      if (deg2(gcd2(d, f)) != 0) return false;
    }
  }
  return deg2(t) == 1 && (t[0] & 1) == 0;  // t == x exactly
}

std::vector<uint8_t> smallest_modulus2(uint32_t m) {
  if (m == 1) return {0, 1};  // x itself
  // Constant term must be 1 (otherwise x divides f), so step over odd
  // low-coefficient patterns in ascending index order.
  for (uint64_t low = 1;; low += 2) {
    if (m < 64 && low >= (1ull << m))
      throw std::logic_error("no irreducible found");  // unreachable
    Poly2 f(m / 64 + 1, 0);
    f[0] = low;
    f[m / 64] |= 1ull << (m % 64);
    if (irreducible2(f)) {
      std::vector<uint8_t> out(m + 1, 0);
      for (uint32_t i = 0; i < m && i < 64; ++i) out[i] = (low >> i) & 1;
      out[m] = 1;
      return out;
    }
    if (low == UINT64_MAX) throw std::logic_error("modulus search exhausted");
  }
}

// ---------------------------------------------------------------------------
// GF(p)[x] on digit vectors for odd characteristic.  Also construction-time
// only; element arithmetic goes through the packed-index routines below.

using PolyP = std::vector<uint8_t>;  // coefficients mod p, low to high

int degp(const PolyP& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[i]) return i;
  return -1;
}

void trimp(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyP mulp(const PolyP& a, const PolyP& b, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<uint32_t> acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) acc[i + j] += a[i] * b[j];
  }
  PolyP r(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<uint8_t>(acc[i] % p);
  trimp(r);
  return r;
}

uint32_t inv_mod_prime(uint32_t a, uint32_t p) {
  uint32_t r = 1, e = p - 2;
  uint64_t base = a % p;
  while (e) {
    if (e & 1) r = static_cast<uint32_t>(r * base % p);
    base = base * base % p;
    e >>= 1;
  }
  return r;
}

void modp(PolyP& a, const PolyP& f, uint32_t p) {
  const int df = degp(f);
  const uint32_t linv = inv_mod_prime(f[df], p);
  for (int da = degp(a); da >= df; --da) {
    const uint32_t c = a[da] * linv % p;
    if (!c) continue;
    for (int i = 0; i <= df; ++i)
      a[da - df + i] =
          static_cast<uint8_t>((a[da - df + i] + c * (p - f[i])) % p);
  }
  trimp(a);
}

PolyP gcdp(PolyP a, PolyP b, uint32_t p) {
  while (!b.empty()) {
    modp(a, b, p);
    std::swap(a, b);
  }
  return a;
}

PolyP powmodp(PolyP base, uint64_t e, const PolyP& f, uint32_t p) {
  PolyP r{1};
  while (e) {
    if (e & 1) {
      r = mulp(r, base, p);
      modp(r, f, p);
    }
    base = mulp(base, base, p);
    modp(base, f, p);
    e >>= 1;
  }
  return r;
}

bool irreduciblep(const PolyP& f, uint32_t p) {
  const int m = degp(f);
  if (m < 1) return false;
  if (m == 1) return true;
  const PolyP x{0, 1};
  PolyP t = x;
  for (int k = 1; k <= m; ++k) {
    t = powmodp(t, p, f, p);
    if (2 * k <= m) {
      PolyP d = t;
      if (d.size() < 2) d.resize(2, 0);
      d[1] = static_cast<uint8_t>((d[1] + p - 1) % p);
      trimp(d);
      const PolyP g = d.empty() ? f : gcdp(d, f, p);
      if (degp(g) != 0) return false;
    }
  }
  trimp(t);
  return t.size() == 2 && t[0] == 0 && t[1] == 1;  // t == x exactly
}

std::vector<uint8_t> smallest_modulusp(uint32_t p, uint32_t m) {
  for (uint64_t v = 0;; ++v) {
    PolyP f(m + 1, 0);
    uint64_t t = v;
    for (uint32_t i = 0; i < m && t; ++i) {
      f[i] = static_cast<uint8_t>(t % p);
      t /= p;
    }
    if (t) throw std::logic_error("no irreducible found");  // unreachable
    f[m] = 1;
    if (irreduciblep(f, p)) return f;
  }
}

// ---------------------------------------------------------------------------
// Element arithmetic on packed indexes.

// p = 2: multiply by x with reduction, then peasant multiplication.
uint64_t xtime2(uint64_t a, uint32_t m, uint64_t mask, uint64_t modbits) {
  const bool carry = (a >> (m - 1)) & 1;
  a = (a << 1) & mask;
  return carry ? (a ^ modbits) : a;
}

uint64_t mulbits2(uint64_t a, uint64_t b, uint32_t m, uint64_t mask,
                  uint64_t modbits) {
  uint64_t r = 0;
  while (b) {
    if (b & 1) r ^= a;
    b >>= 1;
    if (!b) break;
    a = xtime2(a, m, mask, modbits);
  }
  return r;
}

// Odd characteristic: unpack the base-p digit vector, operate, repack.
// These fields are small test configurations, so clarity beats speed.
void unpack_digits(uint64_t v, uint32_t p, uint32_t m, uint32_t* d) {
  for (uint32_t i = 0; i < m; ++i) {
    d[i] = static_cast<uint32_t>(v % p);
    v /= p;
  }
}

uint64_t pack_digits(const uint32_t* d, uint32_t p, uint32_t m) {
  uint64_t v = 0;
  for (uint32_t i = m; i-- > 0;) v = v * p + d[i];
  return v;
}

constexpr uint32_t kMaxDigits = 64;

}  // namespace

// ---------------------------------------------------------------------------

FieldParams::FieldParams(uint32_t p, uint32_t m, std::vector<uint8_t> modulus)
    : p_(p), m_(m), modulus_(std::move(modulus)) {
  if (!is_prime(p_)) throw UsageError("field characteristic must be prime");
  if (p_ != 2 && p_ > 251)
    throw UsageError("odd characteristic larger than 251 is not supported");
  if (m_ < 1) throw UsageError("extension degree must be at least 1");
  if (modulus_.size() != static_cast<size_t>(m_) + 1)
    throw UsageError("modulus must have exactly m+1 coefficients");
  for (uint8_t c : modulus_)
    if (c >= p_) throw UsageError("modulus coefficients must lie in [0, p)");
  if (modulus_[m_] != 1) throw UsageError("modulus must be monic");

  if (p_ == 2) {
    Poly2 f(m_ / 64 + 1, 0);
    for (uint32_t i = 0; i <= m_; ++i)
      if (modulus_[i]) f[i / 64] |= 1ull << (i % 64);
    if (!irreducible2(f)) throw UsageError("modulus is reducible");
  } else {
    PolyP f(modulus_.begin(), modulus_.end());
    if (!irreduciblep(f, p_)) throw UsageError("modulus is reducible");
  }

  // Field order, saturating at 2^127 for parameter-only instances.
  unsigned __int128 o = 1;
  bool overflow = false;
  for (uint32_t i = 0; i < m_; ++i) {
    if (o > (static_cast<unsigned __int128>(1) << 120) / p_) {
      overflow = true;
      break;
    }
    o *= p_;
  }
  order_ = overflow ? 0 : o;

  if (p_ == 2) {
    supports_elements_ = m_ <= 64;
    byte_length_ = (m_ + 7) / 8;
    if (supports_elements_) {
      index_mask_ = (m_ == 64) ? ~0ull : ((1ull << m_) - 1);
      modulus_bits_ = 0;
      for (uint32_t i = 0; i < m_; ++i)
        if (modulus_[i]) modulus_bits_ |= 1ull << i;
    }
  } else {
    supports_elements_ =
        !overflow && order_ <= (static_cast<unsigned __int128>(1) << 63);
    if (supports_elements_) {
      uint64_t top = static_cast<uint64_t>(order_ - 1);
      size_t bits = 0;
      while (top) {
        ++bits;
        top >>= 1;
      }
      byte_length_ = (bits + 7) / 8;
    }
  }
}

FieldRef FieldParams::make(uint32_t p, uint32_t m,
                           const std::vector<uint8_t>& modulus) {
  return FieldRef(new FieldParams(p, m, modulus));
}

FieldRef FieldParams::make(uint32_t p, uint32_t m) {
  static std::mutex mu;
  static std::map<std::pair<uint32_t, uint32_t>, FieldRef> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_pair(p, m);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  if (!is_prime(p)) throw UsageError("field characteristic must be prime");
  if (m < 1) throw UsageError("extension degree must be at least 1");
  std::vector<uint8_t> mod =
      (p == 2) ? smallest_modulus2(m) : smallest_modulusp(p, m);
  FieldRef ref(new FieldParams(p, m, std::move(mod)));
  cache.emplace(key, ref);
  return ref;
}

Element FieldParams::element(uint64_t index) const {
  if (!supports_elements_)
    throw UsageError("field too large for element arithmetic");
  if (p_ == 2) {
    if (index > index_mask_) throw UsageError("element index out of range");
  } else if (index >= static_cast<uint64_t>(order_)) {
    throw UsageError("element index out of range");
  }
  return Element(this, index);
}

Element FieldParams::zero() const { return element(0); }
Element FieldParams::one() const { return element(1); }

Element FieldParams::from_bytes(std::span<const uint8_t> bytes) const {
  if (!supports_elements_)
    throw UsageError("field too large for element arithmetic");
  if (bytes.size() != byte_length_)
    throw UsageError("encoded element has wrong length");
  uint64_t v = 0;
  for (size_t i = bytes.size(); i-- > 0;) v = (v << 8) | bytes[i];
  return element(v);  // revalidates the range
}

Element FieldParams::sample(Rng& rng) const {
  if (!supports_elements_)
    throw UsageError("field too large for element arithmetic");
  if (p_ == 2) return Element(this, rng.next() & index_mask_);
  return Element(this, rng.below(static_cast<uint64_t>(order_)));
}

// ---------------------------------------------------------------------------

const FieldParams& Element::checked_field() const {
  if (!field_) throw UsageError("operation on unbound field element");
  if (!field_->supports_elements_)
    throw UsageError("field too large for element arithmetic");
  return *field_;
}

const FieldParams& Element::checked_field(const Element& o) const {
  const FieldParams& f = checked_field();
  o.checked_field();
  if (field_ != o.field_ && !f.same(*o.field_))
    throw UsageError("field elements belong to different fields");
  return f;
}

Element Element::operator+(const Element& o) const {
  const FieldParams& f = checked_field(o);
  if (f.p_ == 2) return Element(field_, v_ ^ o.v_);
  uint32_t a[kMaxDigits], b[kMaxDigits];
  unpack_digits(v_, f.p_, f.m_, a);
  unpack_digits(o.v_, f.p_, f.m_, b);
  for (uint32_t i = 0; i < f.m_; ++i) a[i] = (a[i] + b[i]) % f.p_;
  return Element(field_, pack_digits(a, f.p_, f.m_));
}

Element Element::operator-(const Element& o) const {
  const FieldParams& f = checked_field(o);
  if (f.p_ == 2) return Element(field_, v_ ^ o.v_);
  uint32_t a[kMaxDigits], b[kMaxDigits];
  unpack_digits(v_, f.p_, f.m_, a);
  unpack_digits(o.v_, f.p_, f.m_, b);
  for (uint32_t i = 0; i < f.m_; ++i) a[i] = (a[i] + f.p_ - b[i]) % f.p_;
  return Element(field_, pack_digits(a, f.p_, f.m_));
}

Element Element::operator-() const {
  const FieldParams& f = checked_field();
  if (f.p_ == 2) return *this;
  uint32_t a[kMaxDigits];
  unpack_digits(v_, f.p_, f.m_, a);
  for (uint32_t i = 0; i < f.m_; ++i) a[i] = (f.p_ - a[i]) % f.p_;
  return Element(field_, pack_digits(a, f.p_, f.m_));
}

Element Element::operator*(const Element& o) const {
  const FieldParams& f = checked_field(o);
  if (f.p_ == 2)
    return Element(field_,
                   mulbits2(v_, o.v_, f.m_, f.index_mask_, f.modulus_bits_));
  // Schoolbook product of digit vectors, reduced by the monic modulus.
  const uint32_t p = f.p_, m = f.m_;
  uint32_t a[kMaxDigits], b[kMaxDigits];
  unpack_digits(v_, p, m, a);
  unpack_digits(o.v_, p, m, b);
  std::vector<uint32_t> acc(2 * m - 1, 0);
  for (uint32_t i = 0; i < m; ++i) {
    if (!a[i]) continue;
    for (uint32_t j = 0; j < m; ++j) acc[i + j] += a[i] * b[j];
  }
  for (uint32_t k = 2 * m - 2; k + 1 > m; --k) {  // k from 2m-2 down to m
    const uint32_t c = acc[k] % p;
    if (!c) continue;
    for (uint32_t i = 0; i < m; ++i)
      acc[k - m + i] = (acc[k - m + i] + c * (p - f.modulus_[i])) % p;
    acc[k] = 0;
  }
  uint32_t r[kMaxDigits];
  for (uint32_t i = 0; i < m; ++i) r[i] = acc[i] % p;
  return Element(field_, pack_digits(r, p, m));
}

Element Element::pow(uint64_t e) const {
  const FieldParams& f = checked_field();
  Element r = f.one();
  Element base = *this;
  while (e) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

Element Element::inverse() const {
  const FieldParams& f = checked_field();
  if (v_ == 0) throw std::domain_error("inverse of zero");
  uint64_t e;
  if (f.p_ == 2 && f.m_ == 64)
    e = ~0ull - 1;  // 2^64 - 2
  else
    e = static_cast<uint64_t>(f.order_ - 2);
  return pow(e);
}

Element Element::frobenius() const {
  const FieldParams& f = checked_field();
  if (f.p_ == 2) return *this * *this;
  return pow(f.p_);
}

Element Element::frobenius_pow(uint64_t l) const {
  Element r = *this;
  for (uint64_t i = 0; i < l; ++i) r = r.frobenius();
  return r;
}

bool Element::operator==(const Element& o) const {
  checked_field(o);
  return v_ == o.v_;
}

std::vector<uint8_t> Element::to_bytes() const {
  const FieldParams& f = checked_field();
  std::vector<uint8_t> out(f.byte_length_);
  uint64_t v = v_;
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<uint8_t>(v & 0xff);
    v >>= 8;
  }
  return out;
}

// ---------------------------------------------------------------------------

Element slp_eval(std::span<const Element> coeffs, const Element& x) {
  if (coeffs.empty()) throw UsageError("slp_eval: empty coefficient list");
  if (!x.bound()) throw UsageError("slp_eval: unbound evaluation point");
  Element t = x;  // running x^(p^i)
  Element acc = x.field()->zero();
  for (const Element& a : coeffs) {
    t = t.frobenius();
    acc += a * t;
  }
  return acc;
}

Element slp_hash(std::span<const Element> xs, const Element& s1,
                 const Element& s2) {
  if (xs.empty()) throw UsageError("slp_hash: empty input vector");
  if (!s1.bound() || !s2.bound()) throw UsageError("slp_hash: unbound secret");
  Element t = s1;  // running s1^(p^l)
  Element acc = s2;
  for (const Element& x : xs) {
    t = t.frobenius();
    acc -= x * t;
  }
  return acc;
}

}  // namespace advnet::gf
