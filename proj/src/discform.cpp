#include "latticefm/discform.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace latfm {

Rat mod_2z(const Rat& x) {
    Int q;
    Rat half = x / 2;
    mpz_fdiv_q(q.get_mpz_t(), half.get_num().get_mpz_t(), half.get_den().get_mpz_t());
    return x - 2 * Rat(q);
}

Rat mod_z(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return x - Rat(q);
}

namespace {

long positive_mod(long x, long m) {
    long r = x % m;
    return r < 0 ? r + m : r;
}

long mpz_mod_long(const Int& x, long m) {
    Int r = x % m;
    long v = r.get_si();
    return positive_mod(v, m);
}

} // namespace

FiniteQuadraticForm::FiniteQuadraticForm(std::vector<long> factors, std::vector<Rat> q, RatMat b)
    : factors_(std::move(factors)), q_(std::move(q)), b_(std::move(b)) {
    std::size_t k = factors_.size();
    if (q_.size() != k || b_.rows() != k || b_.cols() != k)
        throw ValidationError("finite quadratic form: shape mismatch");
    for (std::size_t i = 0; i < k; ++i) {
        if (factors_[i] <= 1) throw ValidationError("invariant factors must exceed 1");
        if (i + 1 < k && factors_[i + 1] % factors_[i] != 0)
            throw ValidationError("invariant factors must form a divisibility chain");
    }
    for (std::size_t i = 0; i < k; ++i) {
        q_[i] = mod_2z(q_[i]);
        for (std::size_t j = 0; j < k; ++j) b_(i, j) = mod_z(b_(i, j));
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (mod_2z(Rat(Int(factors_[i]) * Int(factors_[i])) * q_[i]) != 0)
            throw ValidationError("q is not well defined modulo 2Z on generator " + std::to_string(i));
        if (mod_z(q_[i] - b_(i, i)) != 0)
            throw ValidationError("b(g,g) must equal q(g) modulo Z");
        for (std::size_t j = 0; j < k; ++j) {
            if (b_(i, j) != b_(j, i)) throw ValidationError("bilinear form must be symmetric");
            if (mod_z(Rat(Int(factors_[i])) * b_(i, j)) != 0)
                throw ValidationError("b is not well defined modulo Z");
        }
    }
}

namespace {

// evaluation on an arbitrary cyclic presentation (orders need not chain)
Rat eval_q_raw(const std::vector<long>& orders, const std::vector<Rat>& qv, const RatMat& b,
               const std::vector<long>& coords) {
    Rat acc = 0;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        long c = positive_mod(coords[i], orders[i]);
        if (c == 0) continue;
        acc += Rat(Int(c) * Int(c)) * qv[i];
        for (std::size_t j = i + 1; j < orders.size(); ++j) {
            long cj = positive_mod(coords[j], orders[j]);
            if (cj == 0) continue;
            acc += 2 * Rat(Int(c) * Int(cj)) * b(i, j);
        }
    }
    return mod_2z(acc);
}

Rat eval_b_raw(const std::vector<long>& orders, const RatMat& b, const std::vector<long>& x,
               const std::vector<long>& y) {
    Rat acc = 0;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        long xi = positive_mod(x[i], orders[i]);
        if (xi == 0) continue;
        for (std::size_t j = 0; j < orders.size(); ++j) {
            long yj = positive_mod(y[j], orders[j]);
            if (yj == 0) continue;
            acc += Rat(Int(xi) * Int(yj)) * b(i, j);
        }
    }
    return mod_z(acc);
}

} // namespace

FiniteQuadraticForm FiniteQuadraticForm::from_cyclic(const std::vector<long>& orders,
                                                     const std::vector<Rat>& q, const RatMat& b) {
    std::vector<long> live_orders;
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] < 1) throw ValidationError("cyclic orders must be positive");
        if (orders[i] > 1) {
            live.push_back(i);
            live_orders.push_back(orders[i]);
        }
    }
    std::size_t k = live.size();
    if (k == 0) return FiniteQuadraticForm();
    std::vector<Rat> ql(k);
    RatMat bl(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        ql[i] = q[live[i]];
        for (std::size_t j = 0; j < k; ++j) bl(i, j) = b(live[i], live[j]);
    }

    std::vector<Int> diag(k);
    for (std::size_t i = 0; i < k; ++i) diag[i] = live_orders[i];
    SmithResult s = smith_normal_form(IntMat::diagonal(diag));
    IntMat uinv = inverse_unimodular(s.u);

    std::vector<long> factors;
    std::vector<std::vector<long>> new_gens; // coordinates in the cyclic presentation
    for (std::size_t i = 0; i < k; ++i) {
        Int d = s.d(i, i);
        if (d == 1) continue;
        if (!d.fits_slong_p()) throw LimitError("GroupTooLarge: invariant factor overflow");
        factors.push_back(d.get_si());
        std::vector<long> g(k);
        for (std::size_t r = 0; r < k; ++r) g[r] = mpz_mod_long(uinv(r, i), live_orders[r]);
        new_gens.push_back(g);
    }
    std::vector<Rat> q2(factors.size());
    RatMat b2(factors.size(), factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
        q2[i] = eval_q_raw(live_orders, ql, bl, new_gens[i]);
        for (std::size_t j = 0; j < factors.size(); ++j)
            b2(i, j) = eval_b_raw(live_orders, bl, new_gens[i], new_gens[j]);
    }
    return FiniteQuadraticForm(std::move(factors), std::move(q2), std::move(b2));
}

Int FiniteQuadraticForm::order() const {
    Int n = 1;
    for (long d : factors_) n *= d;
    return n;
}

FqfElement FiniteQuadraticForm::reduce(const std::vector<long>& coords) const {
    if (coords.size() != factors_.size()) throw ValidationError("element coordinate mismatch");
    FqfElement out(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) out[i] = positive_mod(coords[i], factors_[i]);
    return out;
}

FqfElement FiniteQuadraticForm::add(const FqfElement& x, const FqfElement& y) const {
    FqfElement out(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i)
        out[i] = positive_mod(x[i] + y[i], factors_[i]);
    return out;
}

FqfElement FiniteQuadraticForm::neg(const FqfElement& x) const {
    FqfElement out(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i) out[i] = positive_mod(-x[i], factors_[i]);
    return out;
}

FqfElement FiniteQuadraticForm::scale(long n, const FqfElement& x) const {
    FqfElement out(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        long r = positive_mod(n, factors_[i]);
        out[i] = long((__int128(r) * x[i]) % factors_[i]);
    }
    return out;
}

bool FiniteQuadraticForm::is_zero(const FqfElement& x) const {
    return std::all_of(x.begin(), x.end(), [](long c) { return c == 0; });
}

long FiniteQuadraticForm::element_order(const FqfElement& x) const {
    long ord = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        long o = factors_[i] / std::gcd(factors_[i], x[i]);
        ord = std::lcm(ord, o);
    }
    return ord;
}

Rat FiniteQuadraticForm::q_of(const FqfElement& x) const {
    return eval_q_raw(factors_, q_, b_, x);
}

Rat FiniteQuadraticForm::b_of(const FqfElement& x, const FqfElement& y) const {
    return eval_b_raw(factors_, b_, x, y);
}

FiniteQuadraticForm FiniteQuadraticForm::negated() const {
    std::vector<Rat> q2(q_.size());
    RatMat b2(b_.rows(), b_.cols());
    for (std::size_t i = 0; i < q_.size(); ++i) {
        q2[i] = mod_2z(-q_[i]);
        for (std::size_t j = 0; j < q_.size(); ++j) b2(i, j) = mod_z(-b_(i, j));
    }
    return FiniteQuadraticForm(factors_, std::move(q2), std::move(b2));
}

FiniteQuadraticForm negate(const FiniteQuadraticForm& q) { return q.negated(); }

std::size_t min_generators(const FiniteQuadraticForm& q) { return q.gens(); }

RatVec DiscriminantForm::lift(const FqfElement& x) const {
    RatVec w(lifts.rows(), Rat(0));
    for (std::size_t j = 0; j < lifts.cols(); ++j) {
        if (x[j] == 0) continue;
        for (std::size_t i = 0; i < lifts.rows(); ++i) w[i] += Rat(Int(x[j])) * lifts(i, j);
    }
    return w;
}

DiscriminantForm discriminant_form(const Lattice& l) {
    DiscriminantForm df;
    std::size_t n = l.rank();
    SmithResult s = smith_normal_form(l.gram());
    df.snf_u = s.u;
    df.snf_diag = s.diagonal();
    for (std::size_t i = 0; i < n; ++i)
        if (df.snf_diag[i] > 1) df.kept.push_back(i);

    std::size_t k = df.kept.size();
    std::vector<long> factors(k);
    df.lifts = RatMat(n, k);
    for (std::size_t a = 0; a < k; ++a) {
        std::size_t i = df.kept[a];
        if (!df.snf_diag[i].fits_slong_p())
            throw LimitError("GroupTooLarge: invariant factor overflow");
        factors[a] = df.snf_diag[i].get_si();
        for (std::size_t r = 0; r < n; ++r) {
            Rat c(s.v(r, i), df.snf_diag[i]);
            c.canonicalize();
            df.lifts(r, a) = c;
        }
    }
    std::vector<Rat> q(k);
    RatMat b(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        RatVec wa = df.lifts.col(a);
        q[a] = mod_2z(bilinear(l.gram(), wa, wa));
        for (std::size_t c = 0; c < k; ++c)
            b(a, c) = mod_z(bilinear(l.gram(), wa, df.lifts.col(c)));
    }
    df.form = FiniteQuadraticForm(std::move(factors), std::move(q), std::move(b));
    return df;
}

FqfElement class_of_dual_vector(const Lattice& l, const DiscriminantForm& df, const RatVec& w) {
    if (w.size() != l.rank()) throw ValidationError("dual vector length mismatch");
    RatVec phi = RatMat(l.gram()) * w;
    IntVec phi_int(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (phi[i].get_den() != 1)
            throw PreconditionError("vector is not in the dual lattice");
        phi_int[i] = phi[i].get_num();
    }
    IntVec c = df.snf_u * phi_int;
    FqfElement out(df.kept.size());
    for (std::size_t a = 0; a < df.kept.size(); ++a) {
        long d = df.form.invariant_factors()[a];
        out[a] = mpz_mod_long(c[df.kept[a]], d);
    }
    return out;
}

bool FqfSubgroup::contains(const FqfElement& x) const {
    return std::binary_search(elements.begin(), elements.end(), x);
}

namespace {

FqfSubgroup make_subgroup(const FiniteQuadraticForm& q, std::vector<FqfElement> gens,
                          std::set<FqfElement> elems) {
    FqfSubgroup h;
    h.gens = std::move(gens);
    h.elements.assign(elems.begin(), elems.end());
    return h;
}

// elements of <S, x> as the union of cosets S + j*x
std::set<FqfElement> extend_elements(const FiniteQuadraticForm& q,
                                     const std::set<FqfElement>& base, const FqfElement& x) {
    std::set<FqfElement> out = base;
    FqfElement step = q.reduce(x);
    FqfElement mult = step;
    std::vector<FqfElement> offsets;
    while (!base.count(mult)) {
        offsets.push_back(mult);
        mult = q.add(mult, step);
    }
    for (const FqfElement& off : offsets)
        for (const FqfElement& e : base) out.insert(q.add(e, off));
    return out;
}

} // namespace

FqfSubgroup subgroup_closure(const FiniteQuadraticForm& q, const std::vector<FqfElement>& gens) {
    std::set<FqfElement> elems{q.zero()};
    for (const FqfElement& g : gens) elems = extend_elements(q, elems, g);
    std::vector<FqfElement> kept_gens;
    for (const FqfElement& g : gens)
        if (!q.is_zero(q.reduce(g))) kept_gens.push_back(q.reduce(g));
    return make_subgroup(q, kept_gens, std::move(elems));
}

FqfSubgroup trivial_subgroup(const FiniteQuadraticForm& q) {
    return subgroup_closure(q, {});
}

std::vector<FqfElement> all_elements(const FiniteQuadraticForm& q, long limit) {
    if (q.order() > limit) throw LimitError("GroupTooLarge: " + q.order().get_str() + " elements");
    std::vector<FqfElement> out;
    FqfElement x = q.zero();
    const auto& d = q.invariant_factors();
    for (;;) {
        out.push_back(x);
        std::size_t i = x.size();
        while (i > 0) {
            if (++x[i - 1] < d[i - 1]) break;
            x[i - 1] = 0;
            --i;
        }
        if (i == 0) break;
    }
    if (q.gens() == 0) return {q.zero()};
    return out;
}

std::vector<FqfSubgroup> all_subgroups(const FiniteQuadraticForm& q, long limit) {
    std::vector<FqfElement> elems = all_elements(q, limit);
    std::map<std::vector<FqfElement>, FqfSubgroup> found;
    FqfSubgroup triv = trivial_subgroup(q);
    found[triv.elements] = triv;
    std::vector<FqfSubgroup> queue{triv};
    while (!queue.empty()) {
        FqfSubgroup s = std::move(queue.back());
        queue.pop_back();
        std::set<FqfElement> base(s.elements.begin(), s.elements.end());
        for (const FqfElement& x : elems) {
            if (base.count(x)) continue;
            std::set<FqfElement> bigger = extend_elements(q, base, x);
            std::vector<FqfElement> key(bigger.begin(), bigger.end());
            if (found.count(key)) continue;
            std::vector<FqfElement> gens = s.gens;
            gens.push_back(x);
            FqfSubgroup t = make_subgroup(q, std::move(gens), std::move(bigger));
            found[key] = t;
            queue.push_back(std::move(t));
        }
    }
    std::vector<FqfSubgroup> out;
    for (auto& [key, sub] : found) out.push_back(std::move(sub));
    std::sort(out.begin(), out.end(), [](const FqfSubgroup& a, const FqfSubgroup& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.elements < b.elements;
    });
    return out;
}

bool is_isotropic(const FiniteQuadraticForm& q, const FqfSubgroup& h) {
    return std::all_of(h.elements.begin(), h.elements.end(),
                       [&](const FqfElement& e) { return q.q_of(e) == 0; });
}

std::vector<FqfSubgroup> isotropic_subgroups(const FiniteQuadraticForm& q, long limit) {
    std::vector<FqfSubgroup> out;
    for (FqfSubgroup& h : all_subgroups(q, limit))
        if (is_isotropic(q, h)) out.push_back(std::move(h));
    return out;
}

FqfSubgroup orthogonal_subgroup(const FiniteQuadraticForm& q, const FqfSubgroup& h, long limit) {
    std::set<FqfElement> elems;
    for (const FqfElement& x : all_elements(q, limit)) {
        bool ok = std::all_of(h.gens.begin(), h.gens.end(),
                              [&](const FqfElement& g) { return q.b_of(x, g) == 0; });
        if (ok) elems.insert(x);
    }
    std::vector<FqfElement> gens(elems.begin(), elems.end());
    return make_subgroup(q, gens, std::move(elems));
}

namespace {

IntMat rows_with_relations(const FiniteQuadraticForm& q, const std::vector<FqfElement>& rows) {
    std::size_t k = q.gens();
    IntMat m(rows.size() + k, k);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < k; ++j) m(i, j) = rows[i][j];
    for (std::size_t i = 0; i < k; ++i) m(rows.size() + i, i) = q.invariant_factors()[i];
    return m;
}

IntMat hnf_basis(const IntMat& m) {
    IntMat h = hermite_normal_form(m).h;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (h(i, j) != 0) {
                keep.push_back(i);
                break;
            }
    IntMat out(keep.size(), h.cols());
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j) out(i, j) = h(keep[i], j);
    return out;
}

// invariant factors and representatives of (lattice spanned by `big`) / (lattice spanned by `small`)
void lattice_quotient(const IntMat& big, const IntMat& small,
                      std::vector<Int>& factors, std::vector<IntVec>& reps) {
    RatMat big_inv = inverse_rational(RatMat(big));
    RatMat x = RatMat(small) * big_inv;
    if (!x.is_integral()) throw Error("quotient: small lattice is not contained in big lattice");
    SmithResult s = smith_normal_form(x.to_int().transposed());
    IntMat uinv = inverse_unimodular(s.u);
    factors.clear();
    reps.clear();
    std::size_t k = big.rows();
    for (std::size_t i = 0; i < k; ++i) {
        Int d = s.d(i, i);
        if (d == 1) continue;
        factors.push_back(d);
        IntVec y(big.cols(), Int(0));
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = 0; c < big.cols(); ++c) y[c] += uinv(r, i) * big(r, c);
        reps.push_back(std::move(y));
    }
}

FqfElement to_element(const FiniteQuadraticForm& q, const IntVec& y) {
    FqfElement e(q.gens());
    for (std::size_t i = 0; i < q.gens(); ++i)
        e[i] = mpz_mod_long(y[i], q.invariant_factors()[i]);
    return e;
}

} // namespace

QuotientForm quotient_form(const FiniteQuadraticForm& q, const FqfSubgroup& h, long limit) {
    if (!is_isotropic(q, h)) throw PreconditionError("NotIsotropic: q does not vanish on H");
    QuotientForm out;
    if (q.gens() == 0) {
        out.form = FiniteQuadraticForm();
        return out;
    }
    FqfSubgroup perp = orthogonal_subgroup(q, h, limit);
    IntMat pb = hnf_basis(rows_with_relations(q, perp.elements));
    IntMat rb = hnf_basis(rows_with_relations(q, h.elements));
    std::vector<Int> factors;
    std::vector<IntVec> reps;
    lattice_quotient(pb, rb, factors, reps);

    std::vector<long> orders;
    std::vector<FqfElement> rep_elems;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (!factors[i].fits_slong_p()) throw LimitError("GroupTooLarge: quotient factor overflow");
        orders.push_back(factors[i].get_si());
        rep_elems.push_back(to_element(q, reps[i]));
    }
    std::vector<Rat> qv(orders.size());
    RatMat bv(orders.size(), orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
        qv[i] = q.q_of(rep_elems[i]);
        for (std::size_t j = 0; j < orders.size(); ++j)
            bv(i, j) = q.b_of(rep_elems[i], rep_elems[j]);
    }
    out.form = FiniteQuadraticForm(orders, std::move(qv), std::move(bv));
    out.reps = std::move(rep_elems);
    return out;
}

SubgroupBasis subgroup_basis(const FiniteQuadraticForm& q, const FqfSubgroup& h) {
    SubgroupBasis out;
    if (q.gens() == 0 || h.order() == 1) return out;
    IntMat hb = hnf_basis(rows_with_relations(q, h.elements));
    std::size_t k = q.gens();
    IntMat diag(k, k);
    for (std::size_t i = 0; i < k; ++i) diag(i, i) = q.invariant_factors()[i];
    std::vector<Int> factors;
    std::vector<IntVec> reps;
    lattice_quotient(hb, diag, factors, reps);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        out.orders.push_back(factors[i].get_si());
        out.basis.push_back(to_element(q, reps[i]));
    }
    return out;
}

FqfAut identity_aut(const FiniteQuadraticForm& q) {
    FqfAut a(q.gens());
    for (std::size_t i = 0; i < q.gens(); ++i) {
        a[i] = q.zero();
        a[i][i] = 1 % q.invariant_factors()[i];
    }
    return a;
}

FqfAut negation_aut(const FiniteQuadraticForm& q) {
    FqfAut a = identity_aut(q);
    for (std::size_t i = 0; i < q.gens(); ++i) a[i] = q.neg(a[i]);
    return a;
}

FqfElement apply_aut(const FiniteQuadraticForm& q, const FqfAut& a, const FqfElement& x) {
    FqfElement out = q.zero();
    for (std::size_t i = 0; i < q.gens(); ++i) {
        if (x[i] == 0) continue;
        out = q.add(out, q.scale(x[i], a[i]));
    }
    return out;
}

FqfAut compose_auts(const FiniteQuadraticForm& q, const FqfAut& a, const FqfAut& b) {
    FqfAut out(q.gens());
    for (std::size_t i = 0; i < q.gens(); ++i) out[i] = apply_aut(q, a, b[i]);
    return out;
}

namespace {

bool generates_whole_group(const FiniteQuadraticForm& q, const std::vector<FqfElement>& images) {
    std::size_t k = q.gens();
    IntMat m(k, images.size() + k);
    for (std::size_t j = 0; j < images.size(); ++j)
        for (std::size_t i = 0; i < k; ++i) m(i, j) = images[j][i];
    for (std::size_t i = 0; i < k; ++i) m(i, images.size() + i) = q.invariant_factors()[i];
    SmithResult s = smith_normal_form(m);
    std::vector<Int> diag = s.diagonal();
    if (s.rank() != k) return false;
    return std::all_of(diag.begin(), diag.begin() + k, [](const Int& d) { return d == 1; });
}

} // namespace

bool is_automorphism(const FiniteQuadraticForm& q, const FqfAut& a) {
    if (a.size() != q.gens()) return false;
    for (std::size_t i = 0; i < q.gens(); ++i) {
        if (q.element_order(a[i]) > q.invariant_factors()[i]) return false;
        if (q.invariant_factors()[i] % q.element_order(a[i]) != 0) return false;
        if (q.q_of(a[i]) != q.gen_q(i)) return false;
        for (std::size_t j = 0; j < q.gens(); ++j)
            if (q.b_of(a[i], a[j]) != mod_z(q.gen_b(i, j))) return false;
    }
    return generates_whole_group(q, a);
}

std::vector<FqfAut> orthogonal_group(const FiniteQuadraticForm& q, long limit) {
    if (q.gens() == 0) return {FqfAut{}};
    std::vector<FqfElement> elems = all_elements(q, limit);
    std::size_t k = q.gens();

    std::vector<std::vector<FqfElement>> candidates(k);
    for (std::size_t i = 0; i < k; ++i)
        for (const FqfElement& x : elems) {
            if (q.invariant_factors()[i] % q.element_order(x) != 0) continue;
            if (q.q_of(x) != q.gen_q(i)) continue;
            candidates[i].push_back(x);
        }

    std::vector<FqfAut> group;
    FqfAut partial(k);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == k) {
            if (generates_whole_group(q, partial)) group.push_back(partial);
            return;
        }
        for (const FqfElement& x : candidates[i]) {
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j)
                if (q.b_of(x, partial[j]) != q.gen_b(i, j)) ok = false;
            if (!ok) continue;
            partial[i] = x;
            self(self, i + 1);
        }
    };
    rec(rec, 0);

    // closure check: the composite of any two listed automorphisms is listed
    std::set<FqfAut> keys(group.begin(), group.end());
    for (const FqfAut& a : group)
        for (const FqfAut& b : group)
            if (!keys.count(compose_auts(q, a, b)))
                throw Error("automorphism enumeration is not closed");
    return group;
}

std::optional<FqfAut> fqf_isomorphic(const FiniteQuadraticForm& q1, const FiniteQuadraticForm& q2,
                                     long limit) {
    if (q1.invariant_factors() != q2.invariant_factors()) return std::nullopt;
    if (q1.gens() == 0) return FqfAut{};

    std::vector<FqfElement> e1 = all_elements(q1, limit);
    std::vector<FqfElement> e2 = all_elements(q2, limit);
    std::multiset<std::pair<long, Rat>> f1, f2;
    for (const FqfElement& x : e1) f1.insert({q1.element_order(x), q1.q_of(x)});
    for (const FqfElement& x : e2) f2.insert({q2.element_order(x), q2.q_of(x)});
    if (f1 != f2) return std::nullopt;

    std::size_t k = q1.gens();
    std::vector<std::vector<FqfElement>> candidates(k);
    for (std::size_t i = 0; i < k; ++i)
        for (const FqfElement& x : e2) {
            if (q1.invariant_factors()[i] % q2.element_order(x) != 0) continue;
            if (q2.q_of(x) != q1.gen_q(i)) continue;
            candidates[i].push_back(x);
        }

    FqfAut partial(k);
    std::optional<FqfAut> result;
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == k) {
            if (!generates_whole_group(q2, partial)) return false;
            result = partial;
            return true;
        }
        for (const FqfElement& x : candidates[i]) {
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j)
                if (q2.b_of(x, partial[j]) != q1.gen_b(i, j)) ok = false;
            if (!ok) continue;
            partial[i] = x;
            if (self(self, i + 1)) return true;
        }
        return false;
    };
    if (!rec(rec, 0)) return std::nullopt;

    // verify the returned map elementwise
    for (const FqfElement& x : e1) {
        FqfElement y = apply_aut(q2, *result, x);
        if (q2.q_of(y) != q1.q_of(x)) throw Error("isomorphism verification failed");
    }
    return result;
}

FqfAut induced_disc_automorphism(const Lattice& l, const DiscriminantForm& df,
                                 const IntMat& isometry) {
    IntMat pulled = isometry.transposed() * l.gram() * isometry;
    if (!(pulled == l.gram())) throw PreconditionError("matrix is not an isometry of the lattice");
    RatMat s(isometry);
    FqfAut a(df.form.gens());
    for (std::size_t i = 0; i < df.form.gens(); ++i) {
        RatVec w = df.lifts.col(i);
        a[i] = class_of_dual_vector(l, df, s * w);
    }
    if (!is_automorphism(df.form, a)) throw Error("isometry did not induce an automorphism");
    return a;
}

} // namespace latfm
