#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fg/ring_tower.hpp"

namespace fg {

// One generator of a finite free commutative algebra. The relation expresses
// g^order in the powers g^0 .. g^(order-1); coefficient j lives in the base.
struct GeneratorSpec {
    std::string name;
    int order = 1;
    std::vector<RingElement> relation;  // size == order
};

class AlgebraElement;

// Finite free commutative algebra over a ring tower, held as an explicit
// structure-constant table. Relations are applied at table-build time only;
// every later operation is plain linear algebra over the base.
class AlgebraSpec : public std::enable_shared_from_this<AlgebraSpec> {
public:
    static std::shared_ptr<const AlgebraSpec> make(std::shared_ptr<const RingTower> base,
                                                   std::vector<GeneratorSpec> gens);

    const std::shared_ptr<const RingTower>& base() const { return base_; }
    int rank() const { return rank_; }
    int generator_count() const { return static_cast<int>(gens_.size()); }
    const GeneratorSpec& generator_spec(int g) const { return gens_[g]; }
    i64 full_precision_units() const { return base_->full_precision_units(); }

    bool compatible(const AlgebraSpec& other) const;

    AlgebraElement zero() const;
    AlgebraElement one() const;
    AlgebraElement generator(int g) const;
    AlgebraElement basis_element(int index) const;
    AlgebraElement from_ring(const RingElement& c) const;  // scalar embedding

    std::string basis_monomial_name(int index) const;
    std::string describe() const;

    struct Term {
        std::uint32_t index;
        bool unit_coeff;         // coefficient is exactly 1
        std::vector<u64> coeff;  // base coords, empty when unit_coeff
    };
    const std::vector<Term>& table_entry(int i, int j) const {
        return table_[static_cast<size_t>(i) * rank_ + j];
    }

private:
    friend class AlgebraElement;
    AlgebraSpec() = default;
    void build_table();
    // reduction of a pure generator power g^e (e up to 2(order-1)) onto g^j, j < order
    std::vector<std::vector<std::vector<u64>>> powred_;  // [g][e][j * d .. ]

    std::shared_ptr<const RingTower> base_;
    std::vector<GeneratorSpec> gens_;
    int rank_ = 1;
    std::vector<int> strides_;
    std::vector<std::vector<Term>> table_;
};

// Coefficient vector over the base in the monomial basis; known_precision is
// the minimum trusted absolute precision across coordinates (uniformizer
// units of the base tower).
class AlgebraElement {
public:
    AlgebraElement() = default;
    AlgebraElement(std::shared_ptr<const AlgebraSpec> spec, std::vector<u64> coords, i64 kp);

    const std::shared_ptr<const AlgebraSpec>& spec() const { return spec_; }
    const std::vector<u64>& coords() const { return coords_; }
    i64 known_precision() const { return kp_; }
    void clamp_precision(i64 kp) {
        if (kp < kp_) kp_ = kp;
    }

    RingElement coordinate(int index) const;  // block as a ring element

    friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
    AlgebraElement operator-() const;
    AlgebraElement scaled(const RingElement& c) const;
    AlgebraElement pow(i64 e) const;

    bool is_zero_at_precision() const;
    i64 valuation_units() const;  // min over coordinates; kValInf for certified zero
    u64 residue_scalar() const;   // scalar coordinate mod p (constant term of the residue)

    AlgebraElement residue(const std::shared_ptr<const AlgebraSpec>& target) const;

    std::string str() const;
    std::string str_bare() const;

private:
    std::shared_ptr<const AlgebraSpec> spec_;
    std::vector<u64> coords_;
    i64 kp_ = 0;
};

EqualityCheck equal_at_precision(const AlgebraElement& a, const AlgebraElement& b);

// Unit inversion by Newton lifting; NotDivisible when no inverse is found.
AlgebraElement algebra_invert(const AlgebraElement& x);

// Coordinate-wise exact division by a base element.
AlgebraElement exact_divide(const AlgebraElement& x, const RingElement& y);

// --------------------------------------------------------------------------
// named constructions

enum class MinPolyVariant { star, star_star };

// Degree-p monic minimal polynomial of Delta (star: coefficients C(p,j)/pi^j)
// or of Delta' = lambda*Delta (star_star: C(p,j)/mu^j). Returned as
// coefficients of T^0 .. T^p. All divisions are carried out exactly through
// the Eisenstein unit factorization pi^(p-1) = p * w.
std::vector<RingElement> delta_minimal_polynomial(i64 p, MinPolyVariant variant,
                                                  const std::shared_ptr<const RingTower>& ring);

// B = o[Delta] over the cyclotomic (or sqrt(pi)) tower.
std::shared_ptr<const AlgebraSpec> make_B(i64 p, std::shared_ptr<const RingTower> ring);
// B' = O[Delta'] over the sqrt(pi) tower.
std::shared_ptr<const AlgebraSpec> make_Bprime(i64 p, std::shared_ptr<const RingTower> ring);
// A' = O[t]/(mu t + t^p), generator named "a" (the generic torsion point).
std::shared_ptr<const AlgebraSpec> make_torsion_algebra(i64 p,
                                                        std::shared_ptr<const RingTower> ring);
// kappa[g]/(g^p) over F_p.
std::shared_ptr<const AlgebraSpec> make_nilpotent_line(i64 p, const std::string& name);
// kappa[a,b]/(a^p, b^p) = alpha_p x alpha_p coordinate ring.
std::shared_ptr<const AlgebraSpec> make_alpha_square(i64 p);
// o[Gamma]/(Gamma^p - 1): the subring for the negative Frobenius-defect test.
std::shared_ptr<const AlgebraSpec> make_gamma_subring(i64 p,
                                                      std::shared_ptr<const RingTower> ring);
// rank-1 wrapper so plain ring coefficients ride the same series engine
std::shared_ptr<const AlgebraSpec> make_scalar(std::shared_ptr<const RingTower> ring);

std::shared_ptr<const AlgebraSpec> tensor_algebras(const std::shared_ptr<const AlgebraSpec>& a,
                                                   const std::shared_ptr<const AlgebraSpec>& b);
AlgebraElement tensor_embed_left(const std::shared_ptr<const AlgebraSpec>& t,
                                 const AlgebraElement& x);
AlgebraElement tensor_embed_right(const std::shared_ptr<const AlgebraSpec>& t,
                                  const AlgebraElement& x);

// Same generators over a larger tower (the base must embed as an initial
// segment of the new tower's chain).
std::shared_ptr<const AlgebraSpec> base_change(const std::shared_ptr<const AlgebraSpec>& a,
                                               std::shared_ptr<const RingTower> new_base);
AlgebraElement base_change(const AlgebraElement& x, const std::shared_ptr<const AlgebraSpec>& to);
RingElement embed_ring(const RingElement& x, const std::shared_ptr<const RingTower>& to);

// Reduction of the whole algebra modulo the maximal ideal of the base.
std::shared_ptr<const AlgebraSpec> residue_algebra(const std::shared_ptr<const AlgebraSpec>& a);

// Lemma-style computations on B ------------------------------------------------

// Orthogonal idempotents indexed by the p-th roots of unity zeta^m, m = 0..p-1.
struct Idempotent {
    RingElement root;      // xi = zeta^m
    AlgebraElement lambda_xi;
};
std::vector<Idempotent> splitting_idempotents(const std::shared_ptr<const AlgebraSpec>& B);

// (x^p - x)/pi, with the exact division itself being the verified claim.
AlgebraElement frobenius_defect(const AlgebraElement& x, const RingElement& pi);

}  // namespace fg
