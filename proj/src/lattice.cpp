#include "latticefm/lattice.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace latfm {

Lattice::Lattice(IntMat gram, std::string label)
    : gram_(std::move(gram)), label_(std::move(label)) {
    if (!gram_.is_symmetric()) throw ValidationError("NotSymmetric: Gram matrix must be symmetric");
    for (std::size_t i = 0; i < gram_.rows(); ++i)
        if (gram_(i, i) % 2 != 0)
            throw ValidationError("NotEven: diagonal entry " + gram_(i, i).get_str() +
                                  " at index " + std::to_string(i));
    if (det_exact(gram_) == 0) throw ValidationError("Degenerate: Gram determinant is zero");
}

Int Lattice::det() const { return det_exact(gram_); }

Embedding::Embedding(Lattice domain, Lattice ambient, IntMat matrix)
    : domain_(std::move(domain)), ambient_(std::move(ambient)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != ambient_.rank() || matrix_.cols() != domain_.rank())
        throw ValidationError("embedding matrix shape mismatch");
    IntMat pulled = matrix_.transposed() * ambient_.gram() * matrix_;
    if (!(pulled == domain_.gram()))
        throw ValidationError("embedding is not isometric onto its image");
}

Lattice make_lattice(const IntMat& gram, const std::string& label) {
    return Lattice(gram, label);
}

Lattice hyperbolic_plane() {
    Lattice u(IntMat::from_rows({{0, 1}, {1, 0}}), "U");
    u.mark_hyperbolic_pair(0, 1);
    return u;
}

Lattice rank_one(const Int& n) {
    if (n == 0) throw ValidationError("BadParameter: <0> is degenerate");
    if (n % 2 != 0) throw ValidationError("BadParameter: <n> needs even n");
    IntMat g(1, 1);
    g(0, 0) = n;
    return Lattice(g, "<" + n.get_str() + ">");
}

namespace {

Lattice simply_laced(const std::vector<std::pair<int, int>>& bonds, std::size_t rank,
                     const std::string& label) {
    IntMat g(rank, rank);
    for (std::size_t i = 0; i < rank; ++i) g(i, i) = 2;
    for (auto [a, b] : bonds) {
        g(a - 1, b - 1) = -1;
        g(b - 1, a - 1) = -1;
    }
    return Lattice(g, label);
}

} // namespace

Lattice e8() {
    // Bourbaki numbering: chain 1-3-4-5-6-7-8 with node 2 attached to 4
    return simply_laced({{1, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {2, 4}}, 8, "E8");
}

Lattice e6() {
    return simply_laced({{1, 3}, {3, 4}, {4, 5}, {5, 6}, {2, 4}}, 6, "E6");
}

Lattice a2() { return Lattice(IntMat::from_rows({{2, 1}, {1, 2}}), "A2"); }

Lattice d16plus_negative() {
    // D16 root basis plus the all-halves glue vector, in doubled coordinates.
    IntMat gens(17, 16);
    for (std::size_t i = 0; i < 15; ++i) {
        gens(i, i) = 2;
        gens(i, i + 1) = -2;
    }
    gens(15, 14) = 2;
    gens(15, 15) = 2;
    for (std::size_t j = 0; j < 16; ++j) gens(16, j) = 1;

    IntMat h = hermite_normal_form(gens).h;
    IntMat basis(16, 16);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) basis(i, j) = h(i, j);

    IntMat gram(16, 16);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) {
            Int dot = 0;
            for (std::size_t k = 0; k < 16; ++k) dot += basis(i, k) * basis(j, k);
            if (dot % 4 != 0) throw ValidationError("D16+ construction produced a non-integral pairing");
            gram(i, j) = -dot / 4;
        }
    return Lattice(gram, "D16plus(-1)");
}

Lattice k3_lattice() {
    Lattice l = direct_sum({hyperbolic_plane(), hyperbolic_plane(), hyperbolic_plane(),
                            twist(e8(), -1), twist(e8(), -1)});
    l.set_label("K3");
    return l;
}

Lattice l2d_lattice(long d) {
    if (d < 1) throw ValidationError("BadParameter: L2d needs d >= 1");
    Lattice l = direct_sum({hyperbolic_plane(), hyperbolic_plane(), rank_one(Int(-2) * d),
                            twist(e8(), -1), twist(e8(), -1)});
    l.set_label("L2d(" + std::to_string(d) + ")");
    return l;
}

Lattice standard_lattice(const std::string& name) {
    if (name == "U") return hyperbolic_plane();
    if (name == "E8") return e8();
    if (name == "E8(-1)") return twist(e8(), -1);
    if (name == "E6") return e6();
    if (name == "E6(-1)") return twist(e6(), -1);
    if (name == "A2") return a2();
    if (name == "A2(-1)") return twist(a2(), -1);
    if (name == "D16plus(-1)") return d16plus_negative();
    if (name == "K3") return k3_lattice();
    if (name.size() > 4 && name.substr(0, 4) == "L2d(" && name.back() == ')') {
        try {
            return l2d_lattice(std::stol(name.substr(4, name.size() - 5)));
        } catch (const std::logic_error&) {
            throw ParseError("BadParameter: cannot parse " + name);
        }
    }
    if (name.size() > 2 && name.front() == '<' && name.back() == '>') {
        Int n;
        if (mpz_set_str(n.get_mpz_t(), name.substr(1, name.size() - 2).c_str(), 10) != 0)
            throw ParseError("BadParameter: cannot parse " + name);
        return rank_one(n);
    }
    throw ParseError("UnknownName: no standard lattice called " + name);
}

Lattice standard_lattice(const std::string& name, long parameter) {
    if (name == "L2d") return l2d_lattice(parameter);
    if (name == "<n>") return rank_one(Int(parameter));
    throw ParseError("UnknownName: no parameterised lattice called " + name);
}

Lattice direct_sum(const Lattice& a, const Lattice& b) { return direct_sum(std::vector<Lattice>{a, b}); }

Lattice direct_sum(const std::vector<Lattice>& parts) {
    std::size_t n = 0;
    for (const Lattice& p : parts) n += p.rank();
    IntMat g(n, n);
    std::size_t off = 0;
    std::vector<std::pair<int, int>> pairs;
    std::string label;
    for (const Lattice& p : parts) {
        for (std::size_t i = 0; i < p.rank(); ++i)
            for (std::size_t j = 0; j < p.rank(); ++j) g(off + i, off + j) = p.gram()(i, j);
        for (auto [e, f] : p.hyperbolic_pairs())
            pairs.emplace_back(int(off) + e, int(off) + f);
        if (!label.empty()) label += "+";
        label += p.label().empty() ? "?" : p.label();
        off += p.rank();
    }
    Lattice out(g, label);
    for (auto [e, f] : pairs) out.mark_hyperbolic_pair(e, f);
    return out;
}

Lattice twist(const Lattice& l, const Int& n) {
    if (n == 0) throw ValidationError("BadParameter: twist by zero is degenerate");
    IntMat g = l.gram();
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= n;
    std::string label = l.label().empty() ? "" : l.label() + "(" + n.get_str() + ")";
    if (n == -1 && !l.label().empty()) label = l.label() + "(-1)";
    Lattice out(g, label);
    if (n == 1)
        for (auto [e, f] : l.hyperbolic_pairs()) out.mark_hyperbolic_pair(e, f);
    return out;
}

Signature signature(const Lattice& l) {
    std::size_t n = l.rank();
    RatMat a(l.gram());
    Signature sig;
    for (std::size_t i = 0; i < n; ++i) {
        if (a(i, i) == 0) {
            std::size_t swap_j = n, mix_j = n;
            for (std::size_t j = i + 1; j < n && swap_j == n; ++j)
                if (a(j, j) != 0) swap_j = j;
            for (std::size_t j = i + 1; j < n && mix_j == n; ++j)
                if (a(i, j) != 0) mix_j = j;
            if (swap_j != n) {
                for (std::size_t k = 0; k < n; ++k) std::swap(a(i, k), a(swap_j, k));
                for (std::size_t k = 0; k < n; ++k) std::swap(a(k, i), a(k, swap_j));
            } else if (mix_j != n) {
                // zero diagonal, nonzero pairing: e_i += e_j makes the pivot 2*a(i,j),
                // so a hyperbolic 2x2 block contributes (1,1)
                for (std::size_t k = 0; k < n; ++k) a(i, k) += a(mix_j, k);
                for (std::size_t k = 0; k < n; ++k) a(k, i) += a(k, mix_j);
            } else {
                throw ValidationError("Degenerate: zero row in congruence diagonalisation");
            }
        }
        Rat pivot = a(i, i);
        if (pivot > 0)
            ++sig.plus;
        else
            ++sig.minus;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (a(j, i) == 0) continue;
            Rat f = a(j, i) / pivot;
            for (std::size_t k = i; k < n; ++k) a(j, k) -= f * a(i, k);
            for (std::size_t k = i; k < n; ++k) a(k, j) -= f * a(k, i);
        }
    }
    return sig;
}

Embedding span_embedding(const Lattice& ambient, const IntMat& columns, const std::string& label) {
    IntMat gram = columns.transposed() * ambient.gram() * columns;
    return Embedding(Lattice(gram, label), ambient, columns);
}

Embedding orthogonal_complement(const Embedding& e) {
    IntMat pairing = e.matrix().transposed() * e.ambient().gram();
    IntMat kernel = integer_kernel_saturated(pairing);
    IntMat gram = kernel.transposed() * e.ambient().gram() * kernel;
    std::string label = e.domain().label().empty() ? "" : e.domain().label() + "^perp";
    return Embedding(Lattice(gram, label), e.ambient(), kernel);
}

bool is_primitive(const Embedding& e) {
    SmithResult s = smith_normal_form(e.matrix());
    for (const Int& d : s.diagonal())
        if (d != 0 && d != 1) return false;
    return s.rank() == e.matrix().cols();
}

Embedding primitive_hull(const Embedding& e) {
    SmithResult s = smith_normal_form(e.matrix());
    std::size_t k = s.rank();
    IntMat uinv = inverse_unimodular(s.u);
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    IntMat basis = uinv.submatrix_cols(idx);
    IntMat gram = basis.transposed() * e.ambient().gram() * basis;
    return Embedding(Lattice(gram, e.domain().label()), e.ambient(), basis);
}

Int divisor(const Lattice& l, const IntVec& v) {
    bool zero = std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
    if (zero) throw PreconditionError("divisor of the zero vector");
    return gcd_vec(l.gram() * v);
}

bool is_primitive_vector(const Lattice& l, const IntVec& v) {
    if (v.size() != l.rank()) throw ValidationError("vector length mismatch");
    return gcd_vec(v) == 1;
}

namespace {

Int floor_rat(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q;
}

Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// q_i and r_ij with Q(x) = sum_i q_i (x_i + sum_{j>i} r_ij x_j)^2
void cholesky_rational(const IntMat& gram, std::vector<Rat>& q, RatMat& r) {
    std::size_t n = gram.rows();
    RatMat a(gram);
    q.assign(n, Rat(0));
    r = RatMat(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = a(i, i);
        if (q[i] <= 0) throw ValidationError("lattice is not positive definite");
        for (std::size_t j = i + 1; j < n; ++j) r(i, j) = a(i, j) / q[i];
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t l = k; l < n; ++l) a(k, l) -= a(i, k) * a(i, l) / q[i];
    }
}

// max integer k with k + c <= sqrt(y), assuming y >= 0
Int upper_index(const Rat& c, const Rat& y) {
    Int s;
    Int prod = y.get_num() * y.get_den();
    mpz_sqrt(s.get_mpz_t(), prod.get_mpz_t());
    Int k = floor_rat(make_rat(s, y.get_den()) - c);
    auto ok = [&](const Int& t) {
        Rat v = Rat(t) + c;
        return v <= 0 || v * v <= y;
    };
    while (ok(k + 1)) k += 1;
    while (!ok(k)) k -= 1;
    return k;
}

// min integer k with k + c >= -sqrt(y)
Int lower_index(const Rat& c, const Rat& y) {
    Int s;
    Int prod = y.get_num() * y.get_den();
    mpz_sqrt(s.get_mpz_t(), prod.get_mpz_t());
    Int k = -floor_rat(make_rat(s, y.get_den()) + c);
    auto ok = [&](const Int& t) {
        Rat v = Rat(t) + c;
        return v >= 0 || v * v <= y;
    };
    while (ok(k - 1)) k -= 1;
    while (!ok(k)) k += 1;
    return k;
}

void enumerate_level(const std::vector<Rat>& q, const RatMat& r, std::size_t level, const Rat& rem,
                     IntVec& x, std::vector<IntVec>& out) {
    if (rem < 0) return;
    std::size_t i = level - 1;
    std::size_t n = q.size();
    Rat c = 0;
    for (std::size_t j = i + 1; j < n; ++j)
        if (x[j] != 0) c += r(i, j) * Rat(x[j]);
    Rat y = rem / q[i];
    Int lo = lower_index(c, y);
    Int hi = upper_index(c, y);
    for (Int t = lo; t <= hi; t += 1) {
        x[i] = t;
        Rat term = (Rat(t) + c);
        Rat rem2 = rem - q[i] * term * term;
        if (rem2 < 0) continue;
        if (i == 0) {
            if (rem2 == 0) out.push_back(x);
        } else {
            enumerate_level(q, r, i, rem2, x, out);
        }
    }
    x[i] = 0;
}

} // namespace

std::vector<IntVec> short_vectors(const Lattice& l, const Int& n) {
    Signature sig = signature(l);
    if (!sig.is_definite() || l.rank() == 0)
        throw PreconditionError("IndefiniteInput: short vector enumeration needs a definite lattice");
    IntMat gram = l.gram();
    Int target = n;
    if (sig.is_negative_definite()) {
        gram = -gram;
        target = -target;
    }
    if (target <= 0) return {};

    std::vector<Rat> q;
    RatMat r;
    cholesky_rational(gram, q, r);
    IntVec x(l.rank(), Int(0));
    std::vector<IntVec> out;
    enumerate_level(q, r, l.rank(), Rat(target), x, out);

    // exact verification of every candidate against the original Gram matrix
    std::vector<IntVec> checked;
    for (const IntVec& v : out) {
        Int val = 0;
        IntVec gv = l.gram() * v;
        for (std::size_t i = 0; i < v.size(); ++i) val += v[i] * gv[i];
        if (val == n) checked.push_back(v);
    }
    std::sort(checked.begin(), checked.end());
    return checked;
}

namespace {

bool canonical_sign(const IntVec& v) {
    for (const Int& x : v) {
        if (x > 0) return true;
        if (x < 0) return false;
    }
    return false;
}

Int eval_form(const IntMat& g, const IntVec& v) {
    Int val = 0;
    IntVec gv = g * v;
    for (std::size_t i = 0; i < v.size(); ++i) val += v[i] * gv[i];
    return val;
}

// true when x^t G x = n (mod m) has a solution
bool residue_representable(const IntMat& g, const Int& n, long m, std::size_t rank) {
    std::vector<long> v(rank, 0);
    IntVec vv(rank, Int(0));
    for (;;) {
        for (std::size_t i = 0; i < rank; ++i) vv[i] = v[i];
        if ((eval_form(g, vv) - n) % m == 0) return true;
        std::size_t i = 0;
        while (i < rank && ++v[i] == m) v[i++] = 0;
        if (i == rank) return false;
    }
}

} // namespace

RepresentResult represents(const Lattice& l, const Int& n, long bound) {
    RepresentResult res;
    Signature sig = signature(l);

    if (sig.is_definite()) {
        bool sign_ok = (sig.is_positive_definite() && n > 0) || (sig.is_negative_definite() && n < 0);
        if (sign_ok) {
            for (const IntVec& v : short_vectors(l, n)) {
                if (!canonical_sign(v)) continue;
                res.status = RepresentResult::Status::Witness;
                res.witness = v;
                res.witness_primitive = (gcd_vec(v) == 1);
                return res;
            }
        }
        res.status = RepresentResult::Status::NotFound;
        res.complete = true;
        return res;
    }

    // congruence obstruction scan; per-modulus cost m^rank * rank^2 is capped
    std::size_t rank = l.rank();
    double cost_cap = 1e7;
    auto scan_cost = [&](long m) {
        double cost = double(rank) * double(rank);
        for (std::size_t i = 0; i < rank && cost <= cost_cap; ++i) cost *= double(m);
        return cost;
    };
    std::vector<long> moduli;
    for (long m = 2; m <= bound; ++m) {
        if (scan_cost(m) > cost_cap) break;
        moduli.push_back(m);
    }
    Int big = 8 * abs(det_exact(l.gram()));
    if (big.fits_slong_p()) {
        long m8 = big.get_si();
        if (scan_cost(m8) <= cost_cap && std::find(moduli.begin(), moduli.end(), m8) == moduli.end())
            moduli.push_back(m8);
    }
    for (long m : moduli) {
        if (!residue_representable(l.gram(), n, m, rank)) {
            res.status = RepresentResult::Status::ObstructedMod;
            res.obstruction_modulus = m;
            return res;
        }
        if (Int(m) > res.largest_scanned_modulus) res.largest_scanned_modulus = m;
    }

    // shell search over |coordinates| <= bound, canonical representatives only
    IntVec v(rank);
    for (long shell = 1; shell <= bound; ++shell) {
        std::vector<long> c(rank, -shell);
        for (;;) {
            bool on_shell = false;
            for (std::size_t i = 0; i < rank; ++i)
                if (c[i] == shell || c[i] == -shell) on_shell = true;
            if (on_shell) {
                for (std::size_t i = 0; i < rank; ++i) v[i] = c[i];
                if (canonical_sign(v) && eval_form(l.gram(), v) == n) {
                    res.status = RepresentResult::Status::Witness;
                    res.witness = v;
                    res.witness_primitive = (gcd_vec(v) == 1);
                    return res;
                }
            }
            std::size_t i = rank;
            while (i > 0 && ++c[i - 1] > shell) c[--i] = -shell;
            if (i == 0) break;
        }
    }
    res.status = RepresentResult::Status::NotFound;
    res.complete = false;
    res.coefficient_bound = bound;
    return res;
}

// all S with S^t G1 S = G2 (first_only for isomorphism testing)
std::vector<IntMat> isometries_into(const Lattice& l1, const IntMat& g2, bool stop_after_first) {
    const IntMat& g1 = l1.gram();
    std::size_t n = g2.rows();
    std::map<Int, std::vector<IntVec>> cache;
    auto shorts = [&](const Int& norm) -> const std::vector<IntVec>& {
        auto it = cache.find(norm);
        if (it == cache.end()) it = cache.emplace(norm, short_vectors(l1, norm)).first;
        return it->second;
    };

    std::vector<IntMat> found;
    std::vector<IntVec> cols(n);
    auto pair_val = [&](const IntVec& a, const IntVec& b) {
        Int val = 0;
        IntVec gb = g1 * b;
        for (std::size_t i = 0; i < a.size(); ++i) val += a[i] * gb[i];
        return val;
    };

    auto rec = [&](auto&& self, std::size_t j) -> bool {
        if (j == n) {
            IntMat s(l1.rank(), n);
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t r = 0; r < l1.rank(); ++r) s(r, c) = cols[c][r];
            found.push_back(s);
            return stop_after_first;
        }
        for (const IntVec& cand : shorts(g2(j, j))) {
            bool ok = true;
            for (std::size_t i = 0; i < j && ok; ++i)
                if (pair_val(cols[i], cand) != g2(i, j)) ok = false;
            if (!ok) continue;
            cols[j] = cand;
            if (self(self, j + 1)) return true;
        }
        return false;
    };
    rec(rec, 0);
    return found;
}

std::optional<IntMat> hyperbolic_plane_basis(const Lattice& l) {
    if (l.rank() != 2 || abs(l.det()) != 1 || signature(l) != Signature{1, 1})
        return std::nullopt;
    const IntMat& g = l.gram();
    Int a = g(0, 0), b = g(0, 1), c = g(1, 1);

    IntVec e(2);
    if (a == 0) {
        e = {Int(1), Int(0)};
    } else if (c == 0) {
        e = {Int(0), Int(1)};
    } else {
        // a x^2 + 2b xy + c y^2 = 0 has the rational root x/y = (-b + 1)/a since b^2 - ac = 1
        Int x = -b + 1, y = a;
        Int gg;
        mpz_gcd(gg.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        e = {x / gg, y / gg};
    }
    IntVec w = g * e;
    // e is primitive isotropic in a unimodular lattice, so (e, .) is surjective onto Z
    Int g01, s, t;
    mpz_gcdext(g01.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), w[0].get_mpz_t(), w[1].get_mpz_t());
    if (abs(g01) != 1) return std::nullopt;
    IntVec f0 = {s / g01, t / g01};
    Int f0sq = 0;
    IntVec gf0 = g * f0;
    for (int i = 0; i < 2; ++i) f0sq += f0[i] * gf0[i];
    IntVec f = {f0[0] - (f0sq / 2) * e[0], f0[1] - (f0sq / 2) * e[1]};

    IntMat basis(2, 2);
    basis(0, 0) = e[0];
    basis(1, 0) = e[1];
    basis(0, 1) = f[0];
    basis(1, 1) = f[1];
    IntMat check = basis.transposed() * g * basis;
    if (!(check == IntMat::from_rows({{0, 1}, {1, 0}}))) return std::nullopt;
    return basis;
}

std::vector<IntMat> isometry_group_definite(const Lattice& l) {
    Signature sig = signature(l);
    if (!sig.is_definite() || l.rank() == 0)
        throw PreconditionError("IndefiniteInput: isometry enumeration needs a definite lattice");
    if (l.rank() > kDefiniteRankLimit)
        throw LimitError("RankLimitExceeded: isometry enumeration is limited to rank <= 8");

    std::vector<IntMat> group = isometries_into(l, l.gram(), false);

    // verify closure under multiplication (inverses follow in a finite group)
    std::set<std::string> keys;
    for (const IntMat& g : group) keys.insert(g.to_string());
    if (!keys.count(IntMat::identity(l.rank()).to_string()))
        throw Error("isometry group misses the identity");
    for (const IntMat& a : group)
        for (const IntMat& b : group)
            if (!keys.count((a * b).to_string()))
                throw Error("isometry group is not closed under composition");
    return group;
}

} // namespace latfm
