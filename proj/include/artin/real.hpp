#pragma once

// Minimal RAII wrapper over mpfr_t. Every result carries the precision given
// at construction; callers track rounding error themselves.

#include <gmpxx.h>
#include <mpfr.h>

#include <climits>

#include <string>
#include <utility>

namespace artin {

class Real {
 public:
  explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(mpfr_prec_t prec, long value) { mpfr_init2(v_, prec); mpfr_set_si(v_, value, MPFR_RNDN); }
  Real(mpfr_prec_t prec, const mpz_class& value) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
  }
  Real(mpfr_prec_t prec, const mpq_class& value) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
  }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  Real operator-() const { Real r(*this); mpfr_neg(r.v_, r.v_, MPFR_RNDN); return r; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_); }

  Real abs() const { Real r(*this); mpfr_abs(r.v_, r.v_, MPFR_RNDN); return r; }
  Real log() const { Real r(prec()); mpfr_log(r.v_, v_, MPFR_RNDN); return r; }
  Real log1p() const { Real r(prec()); mpfr_log1p(r.v_, v_, MPFR_RNDN); return r; }
  Real exp() const { Real r(prec()); mpfr_exp(r.v_, v_, MPFR_RNDN); return r; }

  // 2^e exactly.
  static Real pow2(mpfr_prec_t prec, long e) {
    Real r(prec, 1);
    mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
    return r;
  }

  double to_double_up() const { return mpfr_get_d(v_, MPFR_RNDU); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long exponent() const { return mpfr_zero_p(v_) ? LONG_MIN : mpfr_get_exp(v_); }

  std::string str(int digits = 30) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
  }

 private:
  mpfr_t v_;
};

}  // namespace artin
