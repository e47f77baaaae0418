#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fg/errors.hpp"
#include "fg/rational.hpp"

namespace fg {

using u64 = std::uint64_t;
using i64 = std::int64_t;

constexpr i64 kValInf = INT64_MAX;  // valuation of a certified zero, in uniformizer units

// Working-precision regime: coefficients are stored modulo p^N, series are
// truncated at total degree D (exclusive).
struct PrecisionParams {
    i64 p = 2;
    int N = 24;
    int D = 12;

    // Structural validity: p prime, N and D positive.
    void validate() const;
    // Budget rule N >= ceil(D/(p-1)) + 4 covering the division losses of the
    // successive-approximation recursion.
    bool meets_budget() const;
};

enum class TowerSpec {
    base_only,            // Z_p
    cyclotomic,           // o = Z_p[zeta_p], generator pi = zeta_p - 1
    cyclotomic_sqrt_pi,   // O = o[sqrt(pi)], lambda = mu = sqrt(pi)
    custom,               // user-supplied Eisenstein chain over Z_p
};

// One Eisenstein extension step: monic polynomial over the tower built so
// far, coefficient k given in the flat power basis of that tower.
struct ExtensionPoly {
    std::string gen_name;
    std::vector<std::vector<u64>> coeffs;  // size degree+1, coeffs.back() == {1,0,...}
};

class RingElement;

// A chain Z_p = L_0 < L_1 < ... of Eisenstein extensions at fixed precision.
// Levels share structure: each RingTower owns its top level and points to the
// subtower below it. Elements are coefficient vectors in the flat power basis
// over Z_p (length degree()). Immutable after construction.
class RingTower : public std::enable_shared_from_this<RingTower> {
public:
    static std::shared_ptr<const RingTower> build(const PrecisionParams& params, TowerSpec spec,
                                                  const std::vector<ExtensionPoly>& custom = {},
                                                  bool require_budget = true);

    i64 p() const { return p_; }
    int precision_digits() const { return N_; }          // user-facing N
    u64 user_modulus() const { return user_modulus_; }   // p^N
    u64 modulus() const { return modulus_; }             // p^Nint, with guard digits
    int degree() const { return d_; }                    // absolute ramification index
    TowerSpec spec() const { return spec_; }
    const std::shared_ptr<const RingTower>& subtower() const { return sub_; }
    int level_count() const { return levels_; }
    const std::string& generator_name() const { return gen_name_; }

    // Full trusted precision of a freshly constructed element, in
    // top-uniformizer units: v(p^N) = N * degree().
    i64 full_precision_units() const { return static_cast<i64>(N_) * d_; }

    bool structurally_equal(const RingTower& other) const;

    // --- raw span arithmetic (length degree()) -------------------------------
    void add(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const;
    void sub(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const;
    void neg(std::span<const u64> a, std::span<u64> out) const;
    void mul(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const;
    void scalar_mul(u64 c, std::span<const u64> a, std::span<u64> out) const;
    // out += a*b, without temporary allocation
    void mul_acc(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const;
    bool all_zero(std::span<const u64> a) const;

    // Valuation in top-uniformizer units (kValInf when zero mod p^Nint).
    i64 valuation_units(std::span<const u64> a) const;

    // Exact division by the top uniformizer (NotDivisible if the element is
    // not a multiple). Loses one uniformizer unit of absolute precision.
    void divide_uniformizer(std::span<u64> a) const;

    // Inverse of a unit (Newton lift from the residue field). NotDivisible if
    // the element is not a unit.
    void invert_unit(std::span<const u64> a, std::span<u64> out) const;

    i64 basis_valuation_units(int index) const { return tval_[index]; }

    // --- distinguished elements ----------------------------------------------
    RingElement zero() const;
    RingElement one() const;
    RingElement from_integer(i64 v) const;
    RingElement generator() const;                   // top-level generator
    bool has_pi() const { return pi_index_ >= 0; }
    RingElement pi() const;                          // cyclotomic prime (level 1)
    RingElement lambda() const;                      // sqrt(pi) towers only
    RingElement mu() const;
    RingElement zeta() const;                        // 1 + pi
    RingElement p_element() const;

    // Residue field F_p, modeled as the one-level tower at precision 1.
    std::shared_ptr<const RingTower> residue_tower() const;

    std::string describe() const;
    // Monomial name of a flat basis element, e.g. "lam*pi^2"; "" for index 0.
    std::string basis_monomial_name(int index) const;

private:
    friend class RingElement;
    RingTower() = default;

    static std::shared_ptr<RingTower> make_base(i64 p, int N, int Nint);
    static std::shared_ptr<RingTower> extend(std::shared_ptr<const RingTower> sub,
                                             const ExtensionPoly& poly);

    u64 mod_reduce(u64 v) const { return v % modulus_; }
    u64 mulmod(u64 a, u64 b) const {
        return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % modulus_);
    }

    i64 p_ = 2;
    int N_ = 1;
    int Nint_ = 1;
    u64 modulus_ = 2;
    u64 user_modulus_ = 2;
    TowerSpec spec_ = TowerSpec::base_only;
    std::shared_ptr<const RingTower> sub_;  // null at the base
    int levels_ = 1;
    int level_degree_ = 1;   // degree of this level over sub_
    std::string gen_name_;
    int d_ = 1;              // flat degree over Z_p
    std::vector<i64> tval_;  // valuation (uniformizer units) of each basis monomial

    // t^level_degree == sum_j red_[j block] * t^j, blocks over sub_.
    std::vector<u64> red_;
    // Inverse of red_[0]/s over sub_ (s = sub uniformizer); used by division.
    std::vector<u64> red0_shift_inv_;
    std::vector<u64> mul_table_;  // d*d*d structure constants

    int pi_index_ = -1;      // flat index of the cyclotomic prime, -1 if absent
    int lam_index_ = -1;

    void build_mul_table();
};

// Value type: coefficient vector plus its trusted absolute precision
// (top-uniformizer units). Arithmetic never renormalizes; only exact_divide
// reduces known_precision.
class RingElement {
public:
    RingElement() = default;
    RingElement(std::shared_ptr<const RingTower> tower, std::vector<u64> coords, i64 kp);

    const std::shared_ptr<const RingTower>& tower() const { return tower_; }
    const std::vector<u64>& coords() const { return coords_; }
    std::vector<u64>& coords_mut() { return coords_; }
    i64 known_precision() const { return kp_; }
    void clamp_precision(i64 kp) {
        if (kp < kp_) kp_ = kp;
    }

    friend RingElement operator+(const RingElement& a, const RingElement& b);
    friend RingElement operator-(const RingElement& a, const RingElement& b);
    friend RingElement operator*(const RingElement& a, const RingElement& b);
    RingElement operator-() const;

    bool is_zero_at_precision() const;
    // v(x) in top-uniformizer units; PrecisionHorizon when x vanishes at a
    // reduced known precision (kp < full) and so cannot be certified zero.
    i64 valuation_units() const;

    // Normalized valuation with v(pi) = 1, i.e. v(p) = p-1; nullopt encodes
    // +infinity (zero at full precision).
    std::optional<Rat> valuation() const;

    RingElement residue() const;  // image in F_p as element of residue_tower()

    std::string str() const;          // "3 + 5*pi (mod 2^16)"
    std::string str_bare() const;     // without the modulus suffix

private:
    std::shared_ptr<const RingTower> tower_;
    std::vector<u64> coords_;
    i64 kp_ = 0;
};

RingElement exact_divide(const RingElement& x, const RingElement& y);

// v(x - y) >= min(kp_x, kp_y)? Returns the certification level used.
struct EqualityCheck {
    bool equal = false;
    i64 certified_units = 0;
};
EqualityCheck equal_at_precision(const RingElement& a, const RingElement& b);

}  // namespace fg
