#include "fg/algebra.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace fg {

namespace {

i64 binomial(i64 n, i64 k) {
    i64 r = 1;
    for (i64 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Exact coordinate-wise division by p (the coordinates must be multiples).
void div_p(const RingTower& tw, std::vector<u64>& coords) {
    const u64 p = static_cast<u64>(tw.p());
    for (auto& c : coords) {
        if (c % p != 0) throw NotDivisible("coordinate is not divisible by p");
        c /= p;
    }
}

}  // namespace

// --------------------------------------------------------------------------
// AlgebraSpec

std::shared_ptr<const AlgebraSpec> AlgebraSpec::make(std::shared_ptr<const RingTower> base,
                                                     std::vector<GeneratorSpec> gens) {
    auto spec = std::shared_ptr<AlgebraSpec>(new AlgebraSpec());
    spec->base_ = std::move(base);
    spec->gens_ = std::move(gens);
    const int d = spec->base_->degree();

    spec->rank_ = 1;
    spec->strides_.clear();
    for (auto& g : spec->gens_) {
        if (g.order < 1) throw RelationInconsistent("generator order must be positive");
        if (static_cast<int>(g.relation.size()) != g.order)
            throw RelationInconsistent("relation for " + g.name + " must list " +
                                       std::to_string(g.order) + " coefficients");
        for (auto& c : g.relation)
            if (!c.tower()->structurally_equal(*spec->base_))
                throw BaseMismatch("relation coefficient lives in a different tower");
        spec->strides_.push_back(spec->rank_);
        spec->rank_ *= g.order;
    }
    for (size_t i = 0; i < spec->gens_.size(); ++i)
        for (size_t j = i + 1; j < spec->gens_.size(); ++j)
            if (spec->gens_[i].name == spec->gens_[j].name)
                throw RelationInconsistent("duplicate generator name " + spec->gens_[i].name);

    // per-generator reduction of pure powers g^e, e = 0 .. 2(order-1)
    spec->powred_.resize(spec->gens_.size());
    for (size_t g = 0; g < spec->gens_.size(); ++g) {
        const int ord = spec->gens_[g].order;
        auto& tab = spec->powred_[g];
        tab.assign(2 * ord - 1, std::vector<u64>(static_cast<size_t>(ord) * d, 0));
        for (int e = 0; e < ord; ++e) tab[e][static_cast<size_t>(e) * d] = 1;
        std::vector<u64> tmp(d);
        for (int e = ord; e <= 2 * ord - 2; ++e) {
            const auto& prev = tab[e - 1];
            auto& cur = tab[e];
            std::vector<u64> top(prev.begin() + static_cast<size_t>(ord - 1) * d,
                                 prev.begin() + static_cast<size_t>(ord) * d);
            for (int j = ord - 1; j >= 1; --j)
                std::copy_n(prev.data() + static_cast<size_t>(j - 1) * d, d,
                            cur.data() + static_cast<size_t>(j) * d);
            std::fill_n(cur.data(), d, 0);
            for (int j = 0; j < ord; ++j) {
                spec->base_->mul(top, spec->gens_[g].relation[j].coords(), tmp);
                std::span<u64> blk(cur.data() + static_cast<size_t>(j) * d, d);
                spec->base_->add(blk, tmp, blk);
            }
        }
    }

    spec->build_table();

    // closure sanity: associativity on basis triples for small ranks
    {
        auto bi = [&](int i) { return spec->basis_element(i); };
        int lim = spec->rank_ <= 12 ? spec->rank_ : 0;
        for (int i = 0; i < lim; ++i)
            for (int j = i; j < lim; ++j)
                for (int k = j; k < lim; ++k) {
                    auto lhs = (bi(i) * bi(j)) * bi(k);
                    auto rhs = bi(i) * (bi(j) * bi(k));
                    if (!spec->base_->all_zero((lhs - rhs).coords()))
                        throw NonClosedTable("structure constants are not associative");
                }
    }
    return spec;
}

void AlgebraSpec::build_table() {
    const int d = base_->degree();
    const int ng = generator_count();
    table_.assign(static_cast<size_t>(rank_) * rank_, {});

    std::vector<int> di(ng), dj(ng);
    std::vector<u64> tmp(d);
    for (int i = 0; i < rank_; ++i) {
        int r = i;
        for (int g = 0; g < ng; ++g) {
            di[g] = r % gens_[g].order;
            r /= gens_[g].order;
        }
        for (int j = 0; j < rank_; ++j) {
            r = j;
            for (int g = 0; g < ng; ++g) {
                dj[g] = r % gens_[g].order;
                r /= gens_[g].order;
            }
            // expand prod_g g^(di+dj) over the basis, folding one generator at a time
            std::vector<std::pair<int, std::vector<u64>>> cur;
            cur.emplace_back(0, std::vector<u64>(d, 0));
            cur[0].second[0] = 1;
            for (int g = 0; g < ng && !cur.empty(); ++g) {
                const int e = di[g] + dj[g];
                const auto& pw = powred_[g][e];
                std::vector<std::pair<int, std::vector<u64>>> nxt;
                for (const auto& [idx, cf] : cur) {
                    for (int jj = 0; jj < gens_[g].order; ++jj) {
                        std::span<const u64> pcf(pw.data() + static_cast<size_t>(jj) * d, d);
                        if (base_->all_zero(pcf)) continue;
                        base_->mul(cf, pcf, tmp);
                        if (base_->all_zero(tmp)) continue;
                        nxt.emplace_back(idx + jj * strides_[g],
                                         std::vector<u64>(tmp.begin(), tmp.end()));
                    }
                }
                std::sort(nxt.begin(), nxt.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                cur.clear();
                for (auto& t : nxt) {
                    if (!cur.empty() && cur.back().first == t.first) {
                        base_->add(cur.back().second, t.second, cur.back().second);
                    } else {
                        cur.push_back(std::move(t));
                    }
                }
            }
            auto& entry = table_[static_cast<size_t>(i) * rank_ + j];
            for (auto& [idx, cf] : cur) {
                if (base_->all_zero(cf)) continue;
                Term t;
                t.index = static_cast<std::uint32_t>(idx);
                t.unit_coeff =
                    cf[0] == 1 &&
                    std::all_of(cf.begin() + 1, cf.end(), [](u64 v) { return v == 0; });
                if (!t.unit_coeff) t.coeff = std::move(cf);
                entry.push_back(std::move(t));
            }
        }
    }
}

bool AlgebraSpec::compatible(const AlgebraSpec& other) const {
    if (this == &other) return true;
    if (rank_ != other.rank_ || gens_.size() != other.gens_.size()) return false;
    if (!base_->structurally_equal(*other.base_)) return false;
    for (size_t g = 0; g < gens_.size(); ++g) {
        if (gens_[g].name != other.gens_[g].name || gens_[g].order != other.gens_[g].order)
            return false;
        for (int j = 0; j < gens_[g].order; ++j)
            if (gens_[g].relation[j].coords() != other.gens_[g].relation[j].coords()) return false;
    }
    return true;
}

AlgebraElement AlgebraSpec::zero() const {
    return AlgebraElement(shared_from_this(),
                          std::vector<u64>(static_cast<size_t>(rank_) * base_->degree(), 0),
                          full_precision_units());
}

AlgebraElement AlgebraSpec::one() const { return basis_element(0); }

AlgebraElement AlgebraSpec::basis_element(int index) const {
    std::vector<u64> c(static_cast<size_t>(rank_) * base_->degree(), 0);
    c[static_cast<size_t>(index) * base_->degree()] = 1;
    return AlgebraElement(shared_from_this(), std::move(c), full_precision_units());
}

AlgebraElement AlgebraSpec::generator(int g) const { return basis_element(strides_[g]); }

AlgebraElement AlgebraSpec::from_ring(const RingElement& c) const {
    if (!c.tower()->structurally_equal(*base_))
        throw BaseMismatch("scalar lives in a different tower");
    std::vector<u64> v(static_cast<size_t>(rank_) * base_->degree(), 0);
    std::copy(c.coords().begin(), c.coords().end(), v.begin());
    return AlgebraElement(shared_from_this(), std::move(v), c.known_precision());
}

std::string AlgebraSpec::basis_monomial_name(int index) const {
    std::string out;
    for (int g = 0; g < generator_count(); ++g) {
        int e = (index / strides_[g]) % gens_[g].order;
        if (e == 0) continue;
        if (!out.empty()) out += "*";
        out += gens_[g].name;
        if (e > 1) out += "^" + std::to_string(e);
    }
    return out;
}

std::string AlgebraSpec::describe() const {
    std::ostringstream os;
    os << base_->describe();
    if (!gens_.empty()) {
        os << " [";
        for (int g = 0; g < generator_count(); ++g) {
            if (g) os << ", ";
            os << gens_[g].name << "^" << gens_[g].order;
        }
        os << "]";
    }
    return os.str();
}

// --------------------------------------------------------------------------
// AlgebraElement

AlgebraElement::AlgebraElement(std::shared_ptr<const AlgebraSpec> spec, std::vector<u64> coords,
                               i64 kp)
    : spec_(std::move(spec)), coords_(std::move(coords)), kp_(kp) {
    assert(static_cast<int>(coords_.size()) == spec_->rank() * spec_->base()->degree());
}

static void check_compat(const AlgebraElement& a, const AlgebraElement& b) {
    if (a.spec().get() == b.spec().get()) return;
    if (!a.spec() || !b.spec() || !a.spec()->compatible(*b.spec()))
        throw DomainMismatch("algebra elements belong to different algebras");
}

RingElement AlgebraElement::coordinate(int index) const {
    const int d = spec_->base()->degree();
    std::vector<u64> c(coords_.begin() + static_cast<size_t>(index) * d,
                       coords_.begin() + static_cast<size_t>(index + 1) * d);
    return RingElement(spec_->base(), std::move(c), kp_);
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    check_compat(a, b);
    const auto& tw = *a.spec()->base();
    std::vector<u64> out(a.coords().size());
    tw.add(a.coords(), b.coords(), out);  // span add works block-free: same modulus everywhere
    return AlgebraElement(a.spec(), std::move(out),
                          std::min(a.known_precision(), b.known_precision()));
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    check_compat(a, b);
    const auto& tw = *a.spec()->base();
    std::vector<u64> out(a.coords().size());
    tw.sub(a.coords(), b.coords(), out);
    return AlgebraElement(a.spec(), std::move(out),
                          std::min(a.known_precision(), b.known_precision()));
}

AlgebraElement AlgebraElement::operator-() const {
    const auto& tw = *spec_->base();
    std::vector<u64> out(coords_.size());
    tw.neg(coords_, out);
    return AlgebraElement(spec_, std::move(out), kp_);
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    check_compat(a, b);
    const auto& spec = *a.spec();
    const auto& tw = *spec.base();
    const int d = tw.degree();
    const int rank = spec.rank();
    std::vector<u64> out(a.coords().size(), 0);
    std::vector<u64> prod(d), tmp(d);
    for (int i = 0; i < rank; ++i) {
        std::span<const u64> xa(a.coords().data() + static_cast<size_t>(i) * d, d);
        if (tw.all_zero(xa)) continue;
        for (int j = 0; j < rank; ++j) {
            std::span<const u64> xb(b.coords().data() + static_cast<size_t>(j) * d, d);
            if (tw.all_zero(xb)) continue;
            tw.mul(xa, xb, prod);
            if (tw.all_zero(prod)) continue;
            for (const auto& term : spec.table_entry(i, j)) {
                std::span<u64> dst(out.data() + static_cast<size_t>(term.index) * d, d);
                if (term.unit_coeff) {
                    tw.add(dst, prod, dst);
                } else {
                    tw.mul(prod, term.coeff, tmp);
                    tw.add(dst, tmp, dst);
                }
            }
        }
    }
    return AlgebraElement(a.spec(), std::move(out),
                          std::min(a.known_precision(), b.known_precision()));
}

AlgebraElement AlgebraElement::scaled(const RingElement& c) const {
    if (!c.tower()->structurally_equal(*spec_->base()))
        throw BaseMismatch("scalar lives in a different tower");
    const auto& tw = *spec_->base();
    const int d = tw.degree();
    std::vector<u64> out(coords_.size());
    for (int i = 0; i < spec_->rank(); ++i)
        tw.mul(std::span<const u64>(coords_.data() + static_cast<size_t>(i) * d, d), c.coords(),
               std::span<u64>(out.data() + static_cast<size_t>(i) * d, d));
    return AlgebraElement(spec_, std::move(out), std::min(kp_, c.known_precision()));
}

AlgebraElement AlgebraElement::pow(i64 e) const {
    AlgebraElement acc = spec_->one();
    AlgebraElement b = *this;
    while (e > 0) {
        if (e & 1) acc = acc * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return acc;
}

bool AlgebraElement::is_zero_at_precision() const { return valuation_units() >= kp_; }

i64 AlgebraElement::valuation_units() const {
    const auto& tw = *spec_->base();
    const int d = tw.degree();
    i64 best = kValInf;
    for (int i = 0; i < spec_->rank(); ++i)
        best = std::min(best, tw.valuation_units(std::span<const u64>(
                                  coords_.data() + static_cast<size_t>(i) * d, d)));
    return best;
}

u64 AlgebraElement::residue_scalar() const {
    if (kp_ < 1) throw PrecisionExhausted("no precision left for a residue");
    return coords_[0] % static_cast<u64>(spec_->base()->p());
}

AlgebraElement AlgebraElement::residue(const std::shared_ptr<const AlgebraSpec>& target) const {
    if (kp_ < 1) throw PrecisionExhausted("no precision left for a residue");
    if (target->rank() != spec_->rank())
        throw DomainMismatch("residue target has a different basis");
    const int d = spec_->base()->degree();
    const u64 p = static_cast<u64>(spec_->base()->p());
    std::vector<u64> out(static_cast<size_t>(spec_->rank()), 0);
    for (int i = 0; i < spec_->rank(); ++i) out[i] = coords_[static_cast<size_t>(i) * d] % p;
    return AlgebraElement(target, std::move(out), target->full_precision_units());
}

std::string AlgebraElement::str_bare() const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < spec_->rank(); ++i) {
        RingElement c = coordinate(i);
        std::string cs = c.str_bare();
        if (cs == "0") continue;
        std::string name = spec_->basis_monomial_name(i);
        if (!first) os << " + ";
        first = false;
        if (name.empty()) {
            os << cs;
        } else if (cs == "1") {
            os << name;
        } else if (cs.find(' ') != std::string::npos) {
            os << "(" << cs << ")*" << name;
        } else {
            os << cs << "*" << name;
        }
    }
    if (first) os << "0";
    return os.str();
}

std::string AlgebraElement::str() const {
    return str_bare() + " (mod " + std::to_string(spec_->base()->p()) + "^" +
           std::to_string(spec_->base()->precision_digits()) + ")";
}

EqualityCheck equal_at_precision(const AlgebraElement& a, const AlgebraElement& b) {
    check_compat(a, b);
    EqualityCheck r;
    r.certified_units = std::min(a.known_precision(), b.known_precision());
    r.equal = (a - b).valuation_units() >= r.certified_units;
    return r;
}

AlgebraElement algebra_invert(const AlgebraElement& x) {
    const auto& spec = *x.spec();
    const u64 p = static_cast<u64>(spec.base()->p());
    u64 r = x.residue_scalar();
    if (r == 0) throw NotDivisible("element has no inverse (residue vanishes)");
    u64 rinv = 1;
    for (u64 k = 0; k < p - 2; ++k) rinv = rinv * r % p;
    AlgebraElement z = x.spec()->one().scaled(spec.base()->from_integer(static_cast<i64>(rinv)));
    AlgebraElement two = x.spec()->one() + x.spec()->one();
    for (int it = 0; it < 64; ++it) {
        AlgebraElement xz = x * z;
        if (spec.base()->all_zero((xz - x.spec()->one()).coords())) return z;
        z = z * (two - xz);
    }
    throw NotDivisible("element has no inverse in the algebra");
}

AlgebraElement exact_divide(const AlgebraElement& x, const RingElement& y) {
    const int rank = x.spec()->rank();
    const int d = x.spec()->base()->degree();
    std::vector<u64> out(x.coords().size(), 0);
    i64 kp = kValInf;
    for (int i = 0; i < rank; ++i) {
        RingElement q = exact_divide(x.coordinate(i), y);
        std::copy(q.coords().begin(), q.coords().end(), out.begin() + static_cast<size_t>(i) * d);
        kp = std::min(kp, q.known_precision());
    }
    return AlgebraElement(x.spec(), std::move(out), kp);
}

// --------------------------------------------------------------------------
// named constructions

std::vector<RingElement> delta_minimal_polynomial(i64 p, MinPolyVariant variant,
                                                  const std::shared_ptr<const RingTower>& ring) {
    if (!ring->has_pi()) throw DomainMismatch("ring has no cyclotomic prime");
    if (variant == MinPolyVariant::star_star && ring->spec() != TowerSpec::cyclotomic_sqrt_pi)
        throw DomainMismatch("the (**) variant needs mu = sqrt(pi)");
    RingElement pi = ring->pi();
    // pi^(p-1) = p * w with w a unit: all binomial divisions route through w.
    RingElement pipow = ring->one();
    for (i64 i = 0; i < p - 1; ++i) pipow = pipow * pi;
    std::vector<u64> wc = pipow.coords();
    div_p(*ring, wc);
    std::vector<u64> winv_c(ring->degree());
    ring->invert_unit(wc, winv_c);
    RingElement winv(ring, std::move(winv_c), ring->full_precision_units());

    std::vector<RingElement> coeffs(static_cast<size_t>(p) + 1, ring->zero());
    coeffs[p] = ring->one();
    for (i64 j = 1; j <= p - 1; ++j) {
        i64 cj = binomial(p, j);
        if (cj % p != 0) throw NotDivisible("binomial coefficient C(p,j) not divisible by p");
        // C(p,j)/u^j = (C(p,j)/p) * u^(e-j) * w^{-1}, where u^e = p*w
        RingElement u = variant == MinPolyVariant::star ? pi : ring->lambda();
        i64 e = variant == MinPolyVariant::star ? p - 1 : 2 * (p - 1);
        RingElement upow = ring->one();
        for (i64 k = 0; k < e - j; ++k) upow = upow * u;
        coeffs[p - j] = ring->from_integer(cj / p) * upow * winv;
    }
    return coeffs;
}

static std::vector<RingElement> relation_from_minpoly(const std::vector<RingElement>& poly) {
    // monic poly(T) = 0  =>  T^p = -(sum_{k<p} poly[k] T^k)
    std::vector<RingElement> rel;
    rel.reserve(poly.size() - 1);
    for (size_t k = 0; k + 1 < poly.size(); ++k) rel.push_back(-poly[k]);
    return rel;
}

std::shared_ptr<const AlgebraSpec> make_B(i64 p, std::shared_ptr<const RingTower> ring) {
    auto poly = delta_minimal_polynomial(p, MinPolyVariant::star, ring);
    return AlgebraSpec::make(
        ring, {GeneratorSpec{"Delta", static_cast<int>(p), relation_from_minpoly(poly)}});
}

std::shared_ptr<const AlgebraSpec> make_Bprime(i64 p, std::shared_ptr<const RingTower> ring) {
    auto poly = delta_minimal_polynomial(p, MinPolyVariant::star_star, ring);
    return AlgebraSpec::make(
        ring, {GeneratorSpec{"Delta'", static_cast<int>(p), relation_from_minpoly(poly)}});
}

std::shared_ptr<const AlgebraSpec> make_torsion_algebra(i64 p,
                                                        std::shared_ptr<const RingTower> ring) {
    std::vector<RingElement> rel(static_cast<size_t>(p), ring->zero());
    rel[1] = -ring->mu();  // t^p = -mu t
    return AlgebraSpec::make(ring, {GeneratorSpec{"a", static_cast<int>(p), std::move(rel)}});
}

std::shared_ptr<const AlgebraSpec> make_nilpotent_line(i64 p, const std::string& name) {
    auto base = RingTower::build(PrecisionParams{p, 1, 2}, TowerSpec::base_only, {}, false);
    std::vector<RingElement> rel(static_cast<size_t>(p), base->zero());
    return AlgebraSpec::make(base, {GeneratorSpec{name, static_cast<int>(p), std::move(rel)}});
}

std::shared_ptr<const AlgebraSpec> make_alpha_square(i64 p) {
    return tensor_algebras(make_nilpotent_line(p, "a"), make_nilpotent_line(p, "b"));
}

std::shared_ptr<const AlgebraSpec> make_gamma_subring(i64 p,
                                                      std::shared_ptr<const RingTower> ring) {
    std::vector<RingElement> rel(static_cast<size_t>(p), ring->zero());
    rel[0] = ring->one();  // Gamma^p = 1
    return AlgebraSpec::make(ring, {GeneratorSpec{"Gamma", static_cast<int>(p), std::move(rel)}});
}

std::shared_ptr<const AlgebraSpec> make_scalar(std::shared_ptr<const RingTower> ring) {
    return AlgebraSpec::make(std::move(ring), {});
}

std::shared_ptr<const AlgebraSpec> tensor_algebras(const std::shared_ptr<const AlgebraSpec>& a,
                                                   const std::shared_ptr<const AlgebraSpec>& b) {
    if (!a->base()->structurally_equal(*b->base()))
        throw BaseMismatch("tensor factors have different base rings");
    std::vector<GeneratorSpec> gens;
    for (int g = 0; g < a->generator_count(); ++g) gens.push_back(a->generator_spec(g));
    for (int g = 0; g < b->generator_count(); ++g) {
        GeneratorSpec gs = b->generator_spec(g);
        // coefficients may come from a structurally equal twin tower; re-anchor
        std::vector<RingElement> rel;
        for (auto& c : gs.relation) rel.emplace_back(a->base(), c.coords(), c.known_precision());
        gs.relation = std::move(rel);
        gens.push_back(std::move(gs));
    }
    return AlgebraSpec::make(a->base(), std::move(gens));
}

AlgebraElement tensor_embed_left(const std::shared_ptr<const AlgebraSpec>& t,
                                 const AlgebraElement& x) {
    const int d = t->base()->degree();
    std::vector<u64> out(static_cast<size_t>(t->rank()) * d, 0);
    std::copy(x.coords().begin(), x.coords().end(), out.begin());
    return AlgebraElement(t, std::move(out), x.known_precision());
}

AlgebraElement tensor_embed_right(const std::shared_ptr<const AlgebraSpec>& t,
                                  const AlgebraElement& x) {
    const int d = t->base()->degree();
    const int rx = x.spec()->rank();
    const int stride = t->rank() / rx;
    std::vector<u64> out(static_cast<size_t>(t->rank()) * d, 0);
    for (int i = 0; i < rx; ++i)
        std::copy_n(x.coords().data() + static_cast<size_t>(i) * d, d,
                    out.begin() + static_cast<size_t>(i) * stride * d);
    return AlgebraElement(t, std::move(out), x.known_precision());
}

RingElement embed_ring(const RingElement& x, const std::shared_ptr<const RingTower>& to) {
    const RingTower* t = to.get();
    while (t && !t->structurally_equal(*x.tower())) t = t->subtower().get();
    if (!t) throw BaseMismatch("tower is not an initial segment of the target tower");
    std::vector<u64> out(to->degree(), 0);
    std::copy(x.coords().begin(), x.coords().end(), out.begin());
    // uniformizer units refine by the relative degree
    const i64 scale = to->degree() / t->degree();
    return RingElement(to, std::move(out), x.known_precision() * scale);
}

std::shared_ptr<const AlgebraSpec> base_change(const std::shared_ptr<const AlgebraSpec>& a,
                                               std::shared_ptr<const RingTower> new_base) {
    std::vector<GeneratorSpec> gens;
    for (int g = 0; g < a->generator_count(); ++g) {
        GeneratorSpec gs = a->generator_spec(g);
        std::vector<RingElement> rel;
        for (auto& c : gs.relation) rel.push_back(embed_ring(c, new_base));
        gs.relation = std::move(rel);
        gens.push_back(std::move(gs));
    }
    return AlgebraSpec::make(std::move(new_base), std::move(gens));
}

AlgebraElement base_change(const AlgebraElement& x, const std::shared_ptr<const AlgebraSpec>& to) {
    if (to->rank() != x.spec()->rank()) throw DomainMismatch("base change must preserve the basis");
    const int dn = to->base()->degree();
    std::vector<u64> out(static_cast<size_t>(to->rank()) * dn, 0);
    i64 kp = kValInf;
    for (int i = 0; i < x.spec()->rank(); ++i) {
        RingElement c = embed_ring(x.coordinate(i), to->base());
        std::copy(c.coords().begin(), c.coords().end(), out.begin() + static_cast<size_t>(i) * dn);
        kp = std::min(kp, c.known_precision());
    }
    return AlgebraElement(to, std::move(out), kp);
}

std::shared_ptr<const AlgebraSpec> residue_algebra(const std::shared_ptr<const AlgebraSpec>& a) {
    auto rt = a->base()->residue_tower();
    std::vector<GeneratorSpec> gens;
    for (int g = 0; g < a->generator_count(); ++g) {
        GeneratorSpec gs = a->generator_spec(g);
        std::vector<RingElement> rel;
        for (auto& c : gs.relation) {
            auto r = c.residue();
            rel.emplace_back(rt, r.coords(), rt->full_precision_units());
        }
        gs.relation = std::move(rel);
        gens.push_back(std::move(gs));
    }
    return AlgebraSpec::make(rt, std::move(gens));
}

// --------------------------------------------------------------------------
// computations on B

std::vector<Idempotent> splitting_idempotents(const std::shared_ptr<const AlgebraSpec>& B) {
    const auto& ring = B->base();
    const i64 p = ring->p();
    if (!ring->has_pi()) throw DomainMismatch("idempotents need the cyclotomic tower");
    RingElement pi = ring->pi();
    RingElement zeta = ring->zeta();

    // eta_m = (zeta^m - 1)/pi = sum_{k=1}^m C(m,k) pi^(k-1), exactly
    std::vector<RingElement> eta;
    for (i64 m = 0; m < p; ++m) {
        RingElement e = ring->zero();
        RingElement pik = ring->one();
        for (i64 k = 1; k <= m; ++k) {
            e = e + ring->from_integer(binomial(m, k)) * pik;
            pik = pik * pi;
        }
        eta.push_back(e);
    }

    // w = pi^(p-1)/p, exact
    RingElement pipow = ring->one();
    for (i64 i = 0; i < p - 1; ++i) pipow = pipow * pi;
    std::vector<u64> wc = pipow.coords();
    div_p(*ring, wc);
    RingElement w(ring, std::move(wc), ring->full_precision_units());

    AlgebraElement delta = B->generator(0);
    std::vector<Idempotent> out;
    RingElement xi = ring->one();
    for (i64 m = 0; m < p; ++m) {
        // Lambda_xi = xi * w * prod_{r != m} (Delta - eta_r)
        AlgebraElement prod = B->one();
        for (i64 r = 0; r < p; ++r) {
            if (r == m) continue;
            prod = prod * (delta - B->from_ring(eta[r]));
        }
        AlgebraElement lam = prod.scaled(xi * w);
        auto chk = equal_at_precision(lam * lam, lam);
        if (!chk.equal)
            throw NotIdempotent("Lambda for root index " + std::to_string(m) +
                                " failed the idempotency check");
        out.push_back(Idempotent{xi, lam});
        xi = xi * zeta;
    }
    return out;
}

AlgebraElement frobenius_defect(const AlgebraElement& x, const RingElement& pi) {
    return exact_divide(x.pow(x.spec()->base()->p()) - x, pi);
}

}  // namespace fg
