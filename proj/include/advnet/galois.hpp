#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "advnet/errors.hpp"
#include "advnet/rng.hpp"

namespace advnet::gf {

class FieldParams;
using FieldRef = std::shared_ptr<const FieldParams>;

// Extension-field parameters: GF(p^m) in the polynomial basis modulo a monic
// irreducible degree-m polynomial over GF(p).  Instances are immutable and
// shared; construction verifies primality of p and irreducibility of the
// modulus, so holding a FieldRef is proof the field is well-formed.
class FieldParams {
 public:
  // Field with an explicitly chosen modulus.  `modulus` lists coefficients
  // low-to-high and must be monic of degree m with m+1 entries.
  static FieldRef make(uint32_t p, uint32_t m,
                       const std::vector<uint8_t>& modulus);

  // Field with the default modulus: the first monic degree-m irreducible
  // over GF(p) in ascending canonical-index order (coefficients weighted by
  // powers of p, constant term as the lowest digit).  For GF(2^4) this is
  // x^4 + x + 1; for GF(2^8) the familiar x^8 + x^4 + x^3 + x + 1.  Results
  // are cached per (p, m).
  static FieldRef make(uint32_t p, uint32_t m);

  uint32_t p() const { return p_; }
  uint32_t m() const { return m_; }
  // p^m as a 128-bit value (p=2, m=64 overflows 64 bits).
  unsigned __int128 order() const { return order_; }
  const std::vector<uint8_t>& modulus() const { return modulus_; }

  // Bytes used by the little-endian wire encoding of one element.
  size_t byte_length() const { return byte_length_; }

  // True when element arithmetic is available (p=2 needs m <= 64; other
  // characteristics need p^m < 2^63).  Parameter-only instances beyond that
  // are still constructible for code-parameter calculations.
  bool supports_elements() const { return supports_elements_; }

  bool same(const FieldParams& o) const {
    return p_ == o.p_ && m_ == o.m_ && modulus_ == o.modulus_;
  }

  class Element element(uint64_t index) const;
  class Element zero() const;
  class Element one() const;
  class Element from_bytes(std::span<const uint8_t> bytes) const;
  class Element sample(Rng& rng) const;

 private:
  friend class Element;
  FieldParams(uint32_t p, uint32_t m, std::vector<uint8_t> modulus);

  uint32_t p_ = 0, m_ = 0;
  std::vector<uint8_t> modulus_;       // coefficients, low to high, monic
  unsigned __int128 order_ = 0;        // p^m
  uint64_t modulus_bits_ = 0;          // p=2: low m coefficient bits
  uint64_t index_mask_ = 0;            // p=2: mask of m low bits
  size_t byte_length_ = 0;
  bool supports_elements_ = false;
};

// One element of GF(p^m).  Stored as the canonical index of its coefficient
// vector (sum of c_i * p^i); for p=2 the index doubles as the packed bit
// pattern, so addition is XOR and multiplication is a shift-and-xor loop.
class Element {
 public:
  Element() = default;  // unbound; any arithmetic throws

  bool bound() const { return field_ != nullptr; }
  const FieldParams* field() const { return field_; }
  uint64_t index() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator*(const Element& o) const;
  Element operator-() const;
  Element& operator+=(const Element& o) { return *this = *this + o; }
  Element& operator-=(const Element& o) { return *this = *this - o; }
  Element& operator*=(const Element& o) { return *this = *this * o; }

  // Multiplicative inverse; zero input raises std::domain_error.
  Element inverse() const;
  Element pow(uint64_t e) const;
  // p-th power (the Frobenius map); for p=2 a single squaring.
  Element frobenius() const;
  // p^l-th power via l successive applications of frobenius().
  Element frobenius_pow(uint64_t l) const;

  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }

  // Little-endian encoding of the canonical index in byte_length() bytes:
  // coefficient c_i occupies bit/digit i, lowest first.
  std::vector<uint8_t> to_bytes() const;

 private:
  friend class FieldParams;
  Element(const FieldParams* f, uint64_t v) : field_(f), v_(v) {}
  const FieldParams& checked_field(const Element& o) const;
  const FieldParams& checked_field() const;

  const FieldParams* field_ = nullptr;
  uint64_t v_ = 0;
};

// Free-function spellings of the basic operations.
inline Element add(const Element& a, const Element& b) { return a + b; }
inline Element mul(const Element& a, const Element& b) { return a * b; }
inline Element inv(const Element& a) { return a.inverse(); }
inline Element frobenius_pow(const Element& a, uint64_t l) {
  return a.frobenius_pow(l);
}

// Evaluate the additive polynomial sum_{i=1..k} a_i x^(p^i).  Computed with
// one running Frobenius chain: k p-th powers and k multiplications.
Element slp_eval(std::span<const Element> coeffs, const Element& x);

// Authentication digest s2 - sum_{l=1..k} x_l s1^(p^l).
Element slp_hash(std::span<const Element> xs, const Element& s1,
                 const Element& s2);

}  // namespace advnet::gf
