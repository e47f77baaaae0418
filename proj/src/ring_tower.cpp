#include "fg/ring_tower.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace fg {

namespace {

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

u64 powmod(u64 base, u64 exp, u64 mod) {
    unsigned __int128 acc = 1;
    unsigned __int128 b = base % mod;
    while (exp) {
        if (exp & 1) acc = acc * b % mod;
        b = b * b % mod;
        exp >>= 1;
    }
    return static_cast<u64>(acc);
}

// Guard digits keep division garbage above every trusted precision level.
constexpr int kGuardDigits = 2;

u64 checked_pow(i64 p, int e) {
    unsigned __int128 m = 1;
    for (int i = 0; i < e; ++i) {
        m *= static_cast<u64>(p);
        if (m >= (static_cast<unsigned __int128>(1) << 62))
            throw PrecisionBudgetTooSmall("p^" + std::to_string(e) +
                                          " exceeds the native coefficient range");
    }
    return static_cast<u64>(m);
}

i64 binomial(i64 n, i64 k) {
    i64 r = 1;
    for (i64 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

void PrecisionParams::validate() const {
    if (!is_prime(p)) throw InvalidConfig("p must be prime, got " + std::to_string(p));
    if (N < 1) throw InvalidConfig("precision N must be positive");
    if (D < 2) throw InvalidConfig("degree bound D must be at least 2");
}

bool PrecisionParams::meets_budget() const {
    i64 need = (D + p - 2) / (p - 1) + 4;  // ceil(D/(p-1)) + 4
    return N >= need;
}

// --------------------------------------------------------------------------
// construction

std::shared_ptr<RingTower> RingTower::make_base(i64 p, int N, int Nint) {
    auto t = std::shared_ptr<RingTower>(new RingTower());
    t->p_ = p;
    t->N_ = N;
    t->Nint_ = Nint;
    t->modulus_ = checked_pow(p, Nint);
    t->user_modulus_ = checked_pow(p, N);
    t->d_ = 1;
    t->levels_ = 1;
    t->level_degree_ = 1;
    t->tval_ = {0};
    t->mul_table_ = {1};
    return t;
}

std::shared_ptr<RingTower> RingTower::extend(std::shared_ptr<const RingTower> sub,
                                             const ExtensionPoly& poly) {
    const int deg = static_cast<int>(poly.coeffs.size()) - 1;
    if (deg < 2) throw NonEisensteinPolynomial("extension degree must be at least 2");
    const int subd = sub->d_;
    for (const auto& c : poly.coeffs)
        if (static_cast<int>(c.size()) != subd)
            throw NonEisensteinPolynomial("coefficient has wrong length for the base level");
    // monic
    {
        const auto& top = poly.coeffs.back();
        if (top[0] != 1 || !std::all_of(top.begin() + 1, top.end(), [](u64 v) { return v == 0; }))
            throw NonEisensteinPolynomial("defining polynomial must be monic");
    }
    // Eisenstein: v(c_0) == 1 base unit, v(c_k) >= 1 for 0 < k < deg
    for (int k = 0; k < deg; ++k) {
        i64 v = sub->valuation_units(poly.coeffs[k]);
        if (k == 0 && v != 1)
            throw NonEisensteinPolynomial("constant term must have valuation exactly one");
        if (v < 1) throw NonEisensteinPolynomial("coefficient of degree " + std::to_string(k) +
                                                 " is a unit");
    }

    auto t = std::shared_ptr<RingTower>(new RingTower());
    t->p_ = sub->p_;
    t->N_ = sub->N_;
    t->Nint_ = sub->Nint_;
    t->modulus_ = sub->modulus_;
    t->user_modulus_ = sub->user_modulus_;
    t->sub_ = sub;
    t->levels_ = sub->levels_ + 1;
    t->level_degree_ = deg;
    t->gen_name_ = poly.gen_name;
    t->d_ = subd * deg;

    t->tval_.resize(t->d_);
    for (int e = 0; e < deg; ++e)
        for (int s = 0; s < subd; ++s) t->tval_[s + subd * e] = sub->tval_[s] * deg + e;

    // red_[j] = -c_j : t^deg = sum_j red_[j] t^j
    t->red_.assign(static_cast<size_t>(deg) * subd, 0);
    for (int j = 0; j < deg; ++j)
        sub->neg(poly.coeffs[j], std::span<u64>(t->red_.data() + static_cast<size_t>(j) * subd, subd));

    // inverse of red_[0]/s over the subtower (exact: guard digits cover the shift)
    {
        std::vector<u64> u0(t->red_.begin(), t->red_.begin() + subd);
        sub->divide_uniformizer(u0);
        t->red0_shift_inv_.assign(subd, 0);
        sub->invert_unit(u0, t->red0_shift_inv_);
    }

    t->build_mul_table();
    return t;
}

void RingTower::build_mul_table() {
    const int deg = level_degree_;
    const int subd = sub_->d_;
    // powred[e] : coords of t^e in the flat basis, e = 0 .. 2deg-2
    std::vector<std::vector<u64>> powred(2 * deg - 1, std::vector<u64>(d_, 0));
    for (int e = 0; e < deg; ++e) powred[e][static_cast<size_t>(e) * subd] = 1;
    std::vector<u64> tmp(subd);
    for (int e = deg; e <= 2 * deg - 2; ++e) {
        const auto& prev = powred[e - 1];
        auto& cur = powred[e];
        // shift blocks up by one t-power, fold the overflow through red_
        std::span<const u64> top(prev.data() + static_cast<size_t>(deg - 1) * subd, subd);
        for (int j = deg - 1; j >= 1; --j)
            std::copy_n(prev.data() + static_cast<size_t>(j - 1) * subd, subd,
                        cur.data() + static_cast<size_t>(j) * subd);
        std::fill_n(cur.data(), subd, 0);
        for (int j = 0; j < deg; ++j) {
            sub_->mul(top, std::span<const u64>(red_.data() + static_cast<size_t>(j) * subd, subd),
                      tmp);
            std::span<u64> blk(cur.data() + static_cast<size_t>(j) * subd, subd);
            sub_->add(blk, tmp, blk);
        }
    }

    mul_table_.assign(static_cast<size_t>(d_) * d_ * d_, 0);
    std::vector<u64> sprod(subd), sterm(subd);
    for (int i = 0; i < d_; ++i) {
        const int s1 = i % subd, e1 = i / subd;
        for (int j = 0; j < d_; ++j) {
            const int s2 = j % subd, e2 = j / subd;
            // basis_i * basis_j = (sub_s1 * sub_s2) * t^(e1+e2)
            std::fill(sprod.begin(), sprod.end(), 0);
            const u64* srow = sub_->mul_table_.data() +
                              (static_cast<size_t>(s1) * subd + s2) * subd;
            std::copy_n(srow, subd, sprod.begin());
            u64* entry = mul_table_.data() + (static_cast<size_t>(i) * d_ + j) * d_;
            const auto& pw = powred[e1 + e2];
            for (int b = 0; b < deg; ++b) {
                sub_->mul(sprod,
                          std::span<const u64>(pw.data() + static_cast<size_t>(b) * subd, subd),
                          sterm);
                for (int s = 0; s < subd; ++s) entry[b * subd + s] = sterm[s];
            }
        }
    }
}

std::shared_ptr<const RingTower> RingTower::build(const PrecisionParams& params, TowerSpec spec,
                                                  const std::vector<ExtensionPoly>& custom,
                                                  bool require_budget) {
    params.validate();
    if (require_budget && !params.meets_budget())
        throw PrecisionBudgetTooSmall(
            "precision budget violated: need N >= ceil(D/(p-1)) + 4 = " +
            std::to_string((params.D + params.p - 2) / (params.p - 1) + 4));

    const i64 p = params.p;
    auto base = make_base(p, params.N, params.N + kGuardDigits);
    base->spec_ = TowerSpec::base_only;
    if (spec == TowerSpec::base_only) return base;

    std::shared_ptr<RingTower> tower = base;
    auto sub_elem = [&](i64 v) {
        std::vector<u64> c(tower->d_, 0);
        i64 m = v % static_cast<i64>(tower->modulus_);
        if (m < 0) m += static_cast<i64>(tower->modulus_);
        c[0] = static_cast<u64>(m);
        return c;
    };

    if (spec == TowerSpec::cyclotomic || spec == TowerSpec::cyclotomic_sqrt_pi) {
        if (p == 2) {
            // ((1+x)^2 - 1)/x = x + 2: degree one, so o = Z_2 with pi = -2.
            tower->spec_ = TowerSpec::cyclotomic;
        } else {
            ExtensionPoly cyc;
            cyc.gen_name = "pi";
            cyc.coeffs.resize(p);
            for (i64 k = 1; k <= p; ++k) cyc.coeffs[k - 1] = sub_elem(binomial(p, k));
            tower = extend(tower, cyc);
            tower->spec_ = TowerSpec::cyclotomic;
        }
        if (spec == TowerSpec::cyclotomic_sqrt_pi) {
            ExtensionPoly sq;
            sq.gen_name = "lam";
            const int subd = tower->d_;
            // x^2 - pi  (for p = 2: pi = -2, so x^2 + 2)
            std::vector<u64> minus_pi(subd, 0);
            if (p == 2) {
                minus_pi[0] = 2 % tower->modulus_;
            } else {
                std::vector<u64> pi_c(subd, 0);
                pi_c[1] = 1;
                tower->neg(pi_c, minus_pi);
            }
            sq.coeffs = {minus_pi, std::vector<u64>(subd, 0), sub_elem(1)};
            sq.coeffs[2].resize(subd, 0);
            tower = extend(tower, sq);
            tower->spec_ = TowerSpec::cyclotomic_sqrt_pi;
        }
        return tower;
    }

    // custom chain
    for (const auto& poly : custom) tower = extend(tower, poly);
    tower->spec_ = TowerSpec::custom;
    return tower;
}

bool RingTower::structurally_equal(const RingTower& other) const {
    if (this == &other) return true;
    if (p_ != other.p_ || N_ != other.N_ || levels_ != other.levels_ ||
        level_degree_ != other.level_degree_ || d_ != other.d_ || red_ != other.red_)
        return false;
    if (!sub_) return !other.sub_;
    return other.sub_ && sub_->structurally_equal(*other.sub_);
}

// --------------------------------------------------------------------------
// span arithmetic

// add/sub/neg/scalar_mul are plain coordinate maps mod p^Nint; they accept
// spans of any length so algebra elements (rank * degree coordinates) can use
// them directly.
void RingTower::add(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const {
    for (size_t i = 0; i < a.size(); ++i) {
        u64 s = a[i] + b[i];
        out[i] = s >= modulus_ ? s - modulus_ : s;
    }
}

void RingTower::sub(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const {
    for (size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] >= b[i] ? a[i] - b[i] : a[i] + (modulus_ - b[i]);
}

void RingTower::neg(std::span<const u64> a, std::span<u64> out) const {
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] == 0 ? 0 : modulus_ - a[i];
}

void RingTower::scalar_mul(u64 c, std::span<const u64> a, std::span<u64> out) const {
    for (size_t i = 0; i < a.size(); ++i) out[i] = mulmod(c, a[i]);
}

void RingTower::mul(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const {
    if (d_ == 1) {
        out[0] = mulmod(a[0], b[0]);
        return;
    }
    std::fill(out.begin(), out.end(), 0);
    mul_acc(a, b, out);
}

void RingTower::mul_acc(std::span<const u64> a, std::span<const u64> b, std::span<u64> out) const {
    if (d_ == 1) {
        u64 s = out[0] + mulmod(a[0], b[0]);
        out[0] = s >= modulus_ ? s - modulus_ : s;
        return;
    }
    for (int i = 0; i < d_; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < d_; ++j) {
            if (b[j] == 0) continue;
            const u64 c = mulmod(a[i], b[j]);
            if (c == 0) continue;
            const u64* row = mul_table_.data() + (static_cast<size_t>(i) * d_ + j) * d_;
            for (int k = 0; k < d_; ++k) {
                if (row[k] == 0) continue;
                u64 s = out[k] + mulmod(c, row[k]);
                out[k] = s >= modulus_ ? s - modulus_ : s;
            }
        }
    }
}

bool RingTower::all_zero(std::span<const u64> a) const {
    return std::all_of(a.begin(), a.end(), [](u64 v) { return v == 0; });
}

i64 RingTower::valuation_units(std::span<const u64> a) const {
    i64 best = kValInf;
    for (int i = 0; i < d_; ++i) {
        if (a[i] == 0) continue;
        u64 c = a[i];
        i64 vp = 0;
        while (c % static_cast<u64>(p_) == 0) {
            c /= static_cast<u64>(p_);
            ++vp;
        }
        best = std::min(best, vp * d_ + tval_[i]);
    }
    return best;
}

void RingTower::divide_uniformizer(std::span<u64> a) const {
    if (!sub_) {
        if (a[0] % static_cast<u64>(p_) != 0)
            throw NotDivisible("element is not divisible by the uniformizer");
        a[0] /= static_cast<u64>(p_);
        return;
    }
    const int deg = level_degree_;
    const int subd = sub_->d_;
    // x = t*y: Y_{deg-1} = X_0 / red_[0], Y_{j-1} = X_j - Y_{deg-1}*red_[j]
    std::vector<u64> ytop(a.begin(), a.begin() + subd);
    sub_->divide_uniformizer(ytop);
    std::vector<u64> tmp(subd);
    sub_->mul(ytop, red0_shift_inv_, tmp);
    ytop = tmp;
    for (int j = 1; j < deg; ++j) {
        std::span<const u64> xj(a.data() + static_cast<size_t>(j) * subd, subd);
        sub_->mul(ytop, std::span<const u64>(red_.data() + static_cast<size_t>(j) * subd, subd),
                  tmp);
        std::span<u64> dst(a.data() + static_cast<size_t>(j - 1) * subd, subd);
        sub_->sub(xj, tmp, dst);
    }
    std::copy(ytop.begin(), ytop.end(), a.begin() + static_cast<size_t>(deg - 1) * subd);
}

void RingTower::invert_unit(std::span<const u64> a, std::span<u64> out) const {
    if (a[0] % static_cast<u64>(p_) == 0)
        throw NotDivisible("element is not a unit, cannot invert");
    std::fill(out.begin(), out.end(), 0);
    out[0] = powmod(a[0] % static_cast<u64>(p_), static_cast<u64>(p_ - 2), static_cast<u64>(p_));
    if (p_ == 2) out[0] = 1;
    // Newton: z <- z(2 - a z), doubling p-adic accuracy each round
    std::vector<u64> az(d_), corr(d_);
    std::vector<u64> two(d_, 0);
    two[0] = 2 % modulus_;
    for (int it = 0; it < 64; ++it) {
        mul(a, out, az);
        bool ident = az[0] == 1 && std::all_of(az.begin() + 1, az.end(), [](u64 v) { return v == 0; });
        if (ident) return;
        sub(two, az, corr);
        std::vector<u64> nz(d_);
        mul(out, corr, nz);
        std::copy(nz.begin(), nz.end(), out.begin());
    }
    throw Error("unit inversion failed to converge");
}

// --------------------------------------------------------------------------
// distinguished elements

RingElement RingTower::zero() const {
    return RingElement(shared_from_this(), std::vector<u64>(d_, 0), full_precision_units());
}

RingElement RingTower::one() const { return from_integer(1); }

RingElement RingTower::from_integer(i64 v) const {
    std::vector<u64> c(d_, 0);
    i64 m = v % static_cast<i64>(modulus_);
    if (m < 0) m += static_cast<i64>(modulus_);
    c[0] = static_cast<u64>(m);
    return RingElement(shared_from_this(), std::move(c), full_precision_units());
}

RingElement RingTower::generator() const {
    if (!sub_) return p_element();
    std::vector<u64> c(d_, 0);
    c[sub_->d_] = 1;
    return RingElement(shared_from_this(), std::move(c), full_precision_units());
}

RingElement RingTower::p_element() const { return from_integer(p_); }

RingElement RingTower::pi() const {
    if (spec_ != TowerSpec::cyclotomic && spec_ != TowerSpec::cyclotomic_sqrt_pi)
        throw DomainMismatch("this tower has no cyclotomic prime");
    if (p_ == 2) return from_integer(-2);
    std::vector<u64> c(d_, 0);
    c[1] = 1;  // level-1 generator sits at flat index 1
    return RingElement(shared_from_this(), std::move(c), full_precision_units());
}

RingElement RingTower::lambda() const {
    if (spec_ != TowerSpec::cyclotomic_sqrt_pi)
        throw DomainMismatch("lambda is only defined in the sqrt(pi) tower");
    return generator();
}

RingElement RingTower::mu() const { return lambda(); }

RingElement RingTower::zeta() const { return pi() + one(); }

std::shared_ptr<const RingTower> RingTower::residue_tower() const {
    return build(PrecisionParams{p_, 1, 2}, TowerSpec::base_only, {}, false);
}

std::string RingTower::describe() const {
    std::ostringstream os;
    os << "Z_" << p_;
    std::vector<std::string> names;
    for (const RingTower* t = this; t->sub_; t = t->sub_.get()) names.push_back(t->gen_name_);
    if (!names.empty()) {
        os << "[";
        for (size_t i = names.size(); i-- > 0;) {
            os << names[i];
            if (i) os << ",";
        }
        os << "]";
    }
    os << " mod " << p_ << "^" << N_;
    return os.str();
}

std::string RingTower::basis_monomial_name(int index) const {
    if (!sub_) return "";
    const int e = index / sub_->d_;
    const int rest = index % sub_->d_;
    std::string lower = sub_->basis_monomial_name(rest);
    std::string top;
    if (e == 1)
        top = gen_name_;
    else if (e > 1)
        top = gen_name_ + "^" + std::to_string(e);
    if (top.empty()) return lower;
    if (lower.empty()) return top;
    return top + "*" + lower;
}

// --------------------------------------------------------------------------
// RingElement

RingElement::RingElement(std::shared_ptr<const RingTower> tower, std::vector<u64> coords, i64 kp)
    : tower_(std::move(tower)), coords_(std::move(coords)), kp_(kp) {
    assert(static_cast<int>(coords_.size()) == tower_->degree());
}

static void check_compat(const RingElement& a, const RingElement& b) {
    if (a.tower().get() == b.tower().get()) return;
    if (!a.tower() || !b.tower() || !a.tower()->structurally_equal(*b.tower()))
        throw DomainMismatch("ring elements belong to different towers");
}

RingElement operator+(const RingElement& a, const RingElement& b) {
    check_compat(a, b);
    std::vector<u64> out(a.coords().size());
    a.tower()->add(a.coords(), b.coords(), out);
    return RingElement(a.tower(), std::move(out), std::min(a.known_precision(), b.known_precision()));
}

RingElement operator-(const RingElement& a, const RingElement& b) {
    check_compat(a, b);
    std::vector<u64> out(a.coords().size());
    a.tower()->sub(a.coords(), b.coords(), out);
    return RingElement(a.tower(), std::move(out), std::min(a.known_precision(), b.known_precision()));
}

RingElement operator*(const RingElement& a, const RingElement& b) {
    check_compat(a, b);
    std::vector<u64> out(a.coords().size());
    a.tower()->mul(a.coords(), b.coords(), out);
    return RingElement(a.tower(), std::move(out), std::min(a.known_precision(), b.known_precision()));
}

RingElement RingElement::operator-() const {
    std::vector<u64> out(coords_.size());
    tower_->neg(coords_, out);
    return RingElement(tower_, std::move(out), kp_);
}

bool RingElement::is_zero_at_precision() const {
    return tower_->valuation_units(coords_) >= kp_;
}

i64 RingElement::valuation_units() const {
    i64 v = tower_->valuation_units(coords_);
    if (v >= kp_) {
        if (kp_ >= tower_->full_precision_units()) return kValInf;
        throw PrecisionHorizon("element vanishes at its known precision (" + std::to_string(kp_) +
                               " uniformizer units) but cannot be certified zero");
    }
    return v;
}

std::optional<Rat> RingElement::valuation() const {
    i64 v = valuation_units();
    if (v == kValInf) return std::nullopt;
    return Rat(v * (tower_->p() - 1), tower_->degree());
}

RingElement RingElement::residue() const {
    if (kp_ < 1) throw PrecisionExhausted("no precision left for a residue");
    auto rt = tower_->residue_tower();
    std::vector<u64> c{coords_[0] % static_cast<u64>(tower_->p())};
    return RingElement(rt, std::move(c), rt->full_precision_units());
}

std::string RingElement::str_bare() const {
    std::ostringstream os;
    bool first = true;
    const u64 um = tower_->user_modulus();
    for (size_t i = 0; i < coords_.size(); ++i) {
        u64 c = coords_[i] % um;
        if (c == 0) continue;
        if (!first) os << " + ";
        first = false;
        std::string name = tower_->basis_monomial_name(static_cast<int>(i));
        if (name.empty())
            os << c;
        else if (c == 1)
            os << name;
        else
            os << c << "*" << name;
    }
    if (first) os << "0";
    return os.str();
}

std::string RingElement::str() const {
    return str_bare() + " (mod " + std::to_string(tower_->p()) + "^" +
           std::to_string(tower_->precision_digits()) + ")";
}

RingElement exact_divide(const RingElement& x, const RingElement& y) {
    check_compat(x, y);
    const auto& tw = x.tower();
    if (tw->valuation_units(y.coords()) >= y.known_precision()) {
        if (y.known_precision() >= tw->full_precision_units())
            throw NotDivisible("division by zero");
        throw PrecisionHorizon("divisor vanishes at its known precision");
    }
    const i64 vy = tw->valuation_units(y.coords());
    const i64 newkp = std::min(x.known_precision(), y.known_precision()) - vy;
    if (newkp <= 0) throw PrecisionExhausted("exact division would leave no trusted precision");
    const i64 vx = tw->valuation_units(x.coords());
    if (vx >= x.known_precision()) {
        // certified zero divided by y stays zero
        return RingElement(tw, std::vector<u64>(tw->degree(), 0), newkp);
    }
    if (vx < vy)
        throw NotDivisible("quotient is not integral: v(x) = " + std::to_string(vx) + " < v(y) = " +
                           std::to_string(vy) + " (uniformizer units)");
    std::vector<u64> xs(x.coords());
    std::vector<u64> ys(y.coords());
    for (i64 k = 0; k < vy; ++k) {
        tw->divide_uniformizer(xs);
        tw->divide_uniformizer(ys);
    }
    std::vector<u64> yinv(tw->degree());
    tw->invert_unit(ys, yinv);
    std::vector<u64> q(tw->degree());
    tw->mul(xs, yinv, q);
    return RingElement(tw, std::move(q), newkp);
}

EqualityCheck equal_at_precision(const RingElement& a, const RingElement& b) {
    check_compat(a, b);
    EqualityCheck r;
    r.certified_units = std::min(a.known_precision(), b.known_precision());
    std::vector<u64> d(a.coords().size());
    a.tower()->sub(a.coords(), b.coords(), d);
    r.equal = a.tower()->valuation_units(d) >= r.certified_units;
    return r;
}

}  // namespace fg
