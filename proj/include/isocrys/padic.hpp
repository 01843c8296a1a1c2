#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isocrys/rational.hpp"

namespace isocrys {

class LocalField;
class Padic;
using FieldPtr = std::shared_ptr<const LocalField>;
using Coeffs = std::vector<Integer>;

inline constexpr std::int64_t kExact = std::numeric_limits<std::int64_t>::max() / 4;

// Rational coordinates of a base-field element in the power basis 1, x, ..., x^{f-1}.
using BaseCoords = std::vector<Rational>;

struct ExtensionSpec {
  // u^e + c_{e-1} u^{e-1} + ... + c_0, all c_i in the maximal ideal, c_0 / p a unit.
  std::vector<BaseCoords> eisenstein;
  struct Automorphism {
    std::string name;
    std::vector<BaseCoords> image;  // tau(u) = sum_i image[i] u^i
  };
  std::vector<Automorphism> automorphisms;
  struct Root {
    long order;
    std::vector<BaseCoords> value;  // sum_i value[i] u^i
  };
  std::vector<Root> roots_of_unity;
};

// A level of the tower Q_p < K_q < L.  Unramified levels use the Teichmüller
// modulus, so the generator x is a primitive (q-1)-th root of unity and
// Frobenius is x -> x^p.
class LocalField : public std::enable_shared_from_this<LocalField> {
 public:
  static FieldPtr unramified(long p, int f, int precision);
  static FieldPtr eisenstein(const FieldPtr& base, const ExtensionSpec& spec);

  long p() const { return p_; }
  int f() const { return f_; }
  int e() const { return e_; }
  int precision() const { return precision_; }
  int work_digits() const { return work_; }
  Integer q() const { return ipow(p_, static_cast<unsigned long>(f_)); }
  bool is_unramified() const { return e_ == 1; }
  const Coeffs& modulus() const { return modulus_; }
  const ExtensionSpec& spec() const { return spec_; }

  FieldPtr base() const;
  FieldPtr prime_field() const;
  FieldPtr with_precision(int precision) const;
  bool same_tower(const LocalField& o) const;

  Padic generator() const;
  Padic uniformizer() const;
  Padic one() const;
  // Primitive root of unity of the given order lying in this field.
  Padic root_of_unity(long order) const;
  bool has_root_of_unity(long order) const;

  int automorphism_count() const { return static_cast<int>(tau_powers_.size()); }
  const std::string& automorphism_name(int idx) const { return spec_.automorphisms.at(idx).name; }
  int automorphism_index(const std::string& name) const;
  Padic apply_automorphism(int idx, const Padic& a) const;

  std::string describe() const;

  // Arithmetic in O_L / p^M on coefficient arrays indexed i*f + j for u^i x^j.
  const Integer& ppow(std::int64_t n) const;
  Coeffs ring_mul(const Coeffs& a, const Coeffs& b, const Integer& mod) const;
  Coeffs ring_unit_inverse(const Coeffs& a, std::int64_t digits) const;
  Coeffs frobenius_coeffs(const Coeffs& a, const Integer& mod) const;

 private:
  LocalField() = default;
  void kq_reduce(Integer* poly, int len) const;
  void kq_mul_into(const Integer* a, const Integer* b, Integer* out, const Integer& mod) const;
  void build_powers();

  long p_ = 2;
  int f_ = 1;
  int e_ = 1;
  int precision_ = 64;
  int work_ = 80;
  Coeffs modulus_;
  Coeffs generator_;
  std::vector<Coeffs> frob_;                  // sigma(x^j)
  std::vector<Coeffs> eis_;                   // c_i as base coefficient arrays
  std::vector<std::vector<Coeffs>> tau_powers_;  // tau(u)^i, i < e
  std::vector<std::pair<long, Coeffs>> roots_;
  std::vector<Integer> ppow_cache_;
  FieldPtr base_;
  FieldPtr qp_;
  ExtensionSpec spec_;
};

// Element of a LocalField in capped relative precision:
//   value = p^k * sum c_ij x^j u^i + O(pi^A),
// with some c_ij a p-adic unit.  A scalar without a field is an exact rational
// constant; it is promoted when combined with a field element.
class Padic {
 public:
  Padic() = default;
  Padic(int v) : q_(v) {}
  Padic(long v) : q_(v) {}
  Padic(const Rational& r) : q_(r) {}
  Padic(const FieldPtr& F, const Rational& r);

  static Padic exact_zero(const FieldPtr& F);
  static Padic zero(const FieldPtr& F, std::int64_t abs_units);
  static Padic from_coeffs(const FieldPtr& F, std::int64_t shift, Coeffs c, std::int64_t abs_units);
  static Padic from_coords(const FieldPtr& F, const std::vector<BaseCoords>& coords);
  // Assemble from coordinates over the next level down.
  static Padic from_base_coordinates(const FieldPtr& F, const std::vector<Padic>& coords);

  const FieldPtr& field() const { return field_; }
  bool is_constant() const { return !field_; }
  const Rational& constant() const { return q_; }
  bool is_exact_zero() const { return field_ ? (zero_ && A_ >= kExact) : q_.is_zero(); }
  bool is_zero() const { return field_ ? zero_ : q_.is_zero(); }

  std::int64_t shift() const { return k_; }
  const Coeffs& coeffs() const { return c_; }
  std::int64_t valuation_units() const;
  Rational valuation() const;
  std::int64_t abs_precision_units() const { return field_ ? A_ : kExact; }
  Rational abs_precision() const;
  std::int64_t relative_units() const;

  Padic realize(const FieldPtr& F) const;
  Padic inverse() const;
  Padic frobenius() const;
  Padic frobenius_inverse() const;
  Padic pow(long n) const;
  Padic with_abs_precision(std::int64_t abs_units) const;

  std::vector<Padic> base_coordinates() const;
  std::string str() const;
  // Canonical digits modulo pi^A, used for hashing and exact comparison of data.
  std::string key(std::int64_t abs_units) const;

  Padic operator-() const;
  Padic& operator+=(const Padic& o);
  Padic& operator-=(const Padic& o);
  Padic& operator*=(const Padic& o);
  Padic& operator/=(const Padic& o);
  friend Padic operator+(Padic a, const Padic& b) { return a += b; }
  friend Padic operator-(Padic a, const Padic& b) { return a -= b; }
  friend Padic operator*(const Padic& a, const Padic& b);
  friend Padic operator/(const Padic& a, const Padic& b) { return a * b.inverse(); }
  // Indistinguishable at the available precision.
  friend bool operator==(const Padic& a, const Padic& b) { return (a - b).is_zero(); }
  friend bool operator!=(const Padic& a, const Padic& b) { return !(a == b); }

 private:
  void normalize();
  void set_zero(std::int64_t abs_units);
  static Padic add(const Padic& a, const Padic& b);

  FieldPtr field_;
  Rational q_;
  std::int64_t k_ = 0;
  std::int64_t A_ = kExact;
  Coeffs c_;
  bool zero_ = true;
};

Padic embed(const Padic& a, const FieldPtr& L);
// Inverse of embed; throws PrecisionFailure if a is not in the smaller field.
Padic restrict_to(const Padic& a, const FieldPtr& K);
bool in_subfield(const Padic& a, const FieldPtr& K);

// Square root in Q_p of a p-adic unit square (odd p) or of a 1 mod 8 unit (p = 2).
Padic sqrt_unit(const Padic& a);

// K(zeta) for zeta of order p^a, as the Eisenstein polynomial Phi_{p^a}(u + 1)
// with zeta = u + 1 and the automorphisms zeta -> zeta^k named "k<k>".
FieldPtr cyclotomic_extension(const FieldPtr& K, long order);

std::int64_t vp(const Integer& n, long p);

}  // namespace isocrys

namespace Eigen {
template <>
struct NumTraits<isocrys::Padic> : GenericNumTraits<isocrys::Padic> {
  using Real = isocrys::Padic;
  using NonInteger = isocrys::Padic;
  using Nested = isocrys::Padic;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 32,
    MulCost = 128
  };
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
