#pragma once

// Finite fields F_{p^r} in polynomial basis over a fixed monic irreducible
// modulus. Elements are encoded as integers: code = sum_i c_i p^i, where c_i is
// the coordinate of b^i and b is the class of the generator.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace nalin {

using Code = std::uint32_t;

class FieldParams;
using FieldPtr = std::shared_ptr<const FieldParams>;

class FieldParams {
 public:
  // Built-in modulus for p in {2,3,5,7}, r <= 4 (Conway polynomials); other
  // (p, r) fall back to the lexicographically first monic irreducible.
  static FieldPtr make(int p, int r);
  // User modulus, coefficients listed constant term first, must be monic of
  // degree r >= 1 and irreducible over F_p.
  static FieldPtr make(int p, const std::vector<int>& modulus);

  int p() const { return p_; }
  int r() const { return r_; }
  Code q() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }

  bool operator==(const FieldParams& other) const {
    return p_ == other.p_ && modulus_ == other.modulus_;
  }

  Code zero() const { return 0; }
  Code one() const { return 1; }
  Code add(Code a, Code b) const {
    if (p_ == 2) return a ^ b;
    if (a == 0) return b;
    if (b == 0) return a;
    return add_nonzero(a, b);
  }
  Code neg(Code a) const { return neg_[a]; }
  Code sub(Code a, Code b) const { return add(a, neg_[b]); }
  Code mul(Code a, Code b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  // Returns the discrete log of a nonzero code with respect to the fixed
  // primitive element; used by convolution kernels.
  std::uint32_t log(Code a) const { return log_[a]; }
  Code exp(std::uint32_t e) const { return exp_[e]; }
  Code inv(Code a) const;
  Code pow(Code a, std::uint64_t n) const;
  Code from_int(std::int64_t n) const;

  std::uint64_t mult_order(Code a) const;

  std::vector<int> coords(Code a) const;
  Code from_coords(const std::vector<int>& coords) const;
  // Primitive element (multiplicative generator) of F_q^*.
  Code generator() const { return exp_[1]; }

  // Literal syntax: integers for r = 1; polynomials in `b` for r > 1.
  std::string render(Code a) const;
  Code parse(std::string_view text) const;

  std::string describe() const;  // "F_4 = F_2[b]/(b^2+b+1)"

 private:
  FieldParams(int p, std::vector<int> modulus);
  Code add_nonzero(Code a, Code b) const;
  Code slow_mul(Code a, Code b) const;

  int p_;
  int r_;
  Code q_;
  std::vector<int> modulus_;
  std::vector<Code> exp_;            // length 2(q-1)
  std::vector<std::uint32_t> log_;   // log_[0] unused
  std::vector<std::int64_t> zech_;   // log(1 + g^n), -1 when 1 + g^n = 0
  std::vector<Code> neg_;
};

bool is_prime(std::int64_t n);
std::vector<std::int64_t> prime_factors(std::int64_t n);
// Trial division by every monic polynomial of degree 1..deg/2.
bool is_irreducible(int p, const std::vector<int>& poly);

// Value type: an element of F_{p^r} together with its field.
class FqElement {
 public:
  FqElement(FieldPtr field, Code code);
  static FqElement from_coeffs(FieldPtr field, const std::vector<int>& coeffs);

  const FieldPtr& field() const { return field_; }
  Code code() const { return code_; }
  std::vector<int> coeffs() const { return field_->coords(code_); }
  bool is_zero() const { return code_ == 0; }
  std::string str() const { return field_->render(code_); }

  friend bool operator==(const FqElement& a, const FqElement& b) {
    return *a.field_ == *b.field_ && a.code_ == b.code_;
  }

 private:
  FieldPtr field_;
  Code code_;
};

FqElement fq_add(const FqElement& x, const FqElement& y);
FqElement fq_sub(const FqElement& x, const FqElement& y);
FqElement fq_mul(const FqElement& x, const FqElement& y);
FqElement fq_inv(const FqElement& x);
FqElement fq_pow(const FqElement& x, std::uint64_t n);
std::uint64_t fq_mult_order(const FqElement& x);

inline FqElement operator+(const FqElement& x, const FqElement& y) { return fq_add(x, y); }
inline FqElement operator-(const FqElement& x, const FqElement& y) { return fq_sub(x, y); }
inline FqElement operator*(const FqElement& x, const FqElement& y) { return fq_mul(x, y); }

// Embedding of F_{p^r} into F_{p^{r'}} (r | r'), fixed by a root of the source
// modulus found by exhaustive search in the target.
class FieldEmbedding {
 public:
  FieldEmbedding(FieldPtr source, FieldPtr target);
  const FieldPtr& source() const { return source_; }
  const FieldPtr& target() const { return target_; }
  Code operator()(Code a) const { return image_[a]; }

 private:
  FieldPtr source_;
  FieldPtr target_;
  std::vector<Code> image_;
};

}  // namespace nalin
