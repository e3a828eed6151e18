#include "latticefm/overlattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace latfm {

namespace {

FqfElement class_of_dual_functional(const DiscriminantForm& df, const IntVec& phi) {
    IntVec c = df.snf_u * phi;
    FqfElement out(df.kept.size());
    for (std::size_t a = 0; a < df.kept.size(); ++a) {
        long d = df.form.invariant_factors()[a];
        Int r = c[df.kept[a]] % d;
        long v = r.get_si() % d;
        out[a] = v < 0 ? v + d : v;
    }
    return out;
}

Int lcm_int(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

} // namespace

OverlatticeResult glue(const Lattice& m, const FqfSubgroup& h) {
    return glue(m, discriminant_form(m), h);
}

OverlatticeResult glue(const Lattice& m, const DiscriminantForm& dm, const FqfSubgroup& h) {
    if (!is_isotropic(dm.form, h))
        throw PreconditionError("NotIsotropic: q_M does not vanish on H");
    std::size_t n = m.rank();

    std::vector<RatVec> lifts;
    for (const FqfElement& g : h.gens) lifts.push_back(dm.lift(g));

    Int den = 1;
    for (const RatVec& w : lifts)
        for (const Rat& x : w) den = lcm_int(den, x.get_den());

    IntMat stacked(n + lifts.size(), n);
    for (std::size_t i = 0; i < n; ++i) stacked(i, i) = den;
    for (std::size_t g = 0; g < lifts.size(); ++g)
        for (std::size_t j = 0; j < n; ++j) {
            Rat scaled = Rat(den) * lifts[g][j];
            stacked(n + g, j) = scaled.get_num();
        }

    HermiteResult hr = hermite_normal_form(stacked);
    if (hr.rank() != n) throw Error("glue: basis extraction lost rank");
    RatMat basis(n, n); // rows are the lattice basis vectors, in M-coordinates
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rat e(hr.h(i, j), den);
            e.canonicalize();
            basis(i, j) = e;
        }

    RatMat gram_rat = basis * RatMat(m.gram()) * basis.transposed();
    if (!gram_rat.is_integral())
        throw Error("glue: the induced form is not integral");
    std::string label = m.label().empty() ? "" : "glue(" + m.label() + ")";
    Lattice glued(gram_rat.to_int(), label);

    RatMat embed_rat = inverse_rational(basis.transposed());
    if (!embed_rat.is_integral()) throw Error("glue: embedding is not integral");
    IntMat embed = embed_rat.to_int();
    Embedding e(m, glued, embed);

    Int index = abs(det_exact(embed));
    if (index != Int(long(h.order()))) throw Error("glue: index does not match |H|");

    FqfSubgroup back = classifying_subgroup(e, dm);
    if (!(back.elements == h.elements)) throw Error("glue: classifying subgroup roundtrip failed");

    return OverlatticeResult{std::move(glued), std::move(e), index};
}

FqfSubgroup classifying_subgroup(const Embedding& i) {
    return classifying_subgroup(i, discriminant_form(i.domain()));
}

FqfSubgroup classifying_subgroup(const Embedding& i, const DiscriminantForm& d_domain) {
    if (i.domain().rank() != i.ambient().rank())
        throw PreconditionError("RankMismatch: classifying subgroup needs a finite-index embedding");
    IntMat duals = i.matrix().transposed() * i.ambient().gram();
    std::vector<FqfElement> gens;
    for (std::size_t j = 0; j < duals.cols(); ++j) {
        IntVec phi(duals.rows());
        for (std::size_t r = 0; r < duals.rows(); ++r) phi[r] = duals(r, j);
        gens.push_back(class_of_dual_functional(d_domain, phi));
    }
    return subgroup_closure(d_domain.form, gens);
}

namespace {

struct SplitContext {
    Lattice m;
    DiscriminantForm dm, dt, dk;

    SplitContext(const Lattice& t, const Lattice& k)
        : m(direct_sum(t, k)), dm(discriminant_form(m)), dt(discriminant_form(t)),
          dk(discriminant_form(k)) {}

    FqfElement chain_class(const FqfElement& x, const FqfElement& y) const {
        RatVec w(m.rank(), Rat(0));
        RatVec wt = dt.lift(x);
        RatVec wk = dk.lift(y);
        for (std::size_t i = 0; i < wt.size(); ++i) w[i] = wt[i];
        for (std::size_t i = 0; i < wk.size(); ++i) w[wt.size() + i] = wk[i];
        return class_of_dual_vector(m, dm, w);
    }
};

} // namespace

SplitProjections split_projections(const Lattice& t, const Lattice& k, const FqfSubgroup& h,
                                   long limit) {
    SplitContext ctx(t, k);
    if (ctx.dm.form.order() > limit)
        throw LimitError("GroupTooLarge: split projection needs the full product");

    std::map<FqfElement, std::pair<FqfElement, FqfElement>> from_chain;
    for (const FqfElement& x : all_elements(ctx.dt.form, limit))
        for (const FqfElement& y : all_elements(ctx.dk.form, limit))
            from_chain[ctx.chain_class(x, y)] = {x, y};

    SplitProjections out;
    std::size_t t_kernel = 0, k_kernel = 0;
    for (const FqfElement& e : h.elements) {
        auto it = from_chain.find(e);
        if (it == from_chain.end()) throw Error("split: chain element not found in the product");
        out.pairs.push_back(it->second);
        if (ctx.dt.form.is_zero(it->second.first)) ++t_kernel;
        if (ctx.dk.form.is_zero(it->second.second)) ++k_kernel;
    }
    out.t_injective = (t_kernel == 1);
    out.k_injective = (k_kernel == 1);

    if (out.t_injective && out.k_injective) {
        std::vector<FqfElement> xs;
        std::map<FqfElement, FqfElement> graph;
        for (const auto& [x, y] : out.pairs) {
            xs.push_back(x);
            graph[x] = y;
        }
        FqfSubgroup gamma = subgroup_closure(ctx.dt.form, xs);
        SubgroupBasis basis = subgroup_basis(ctx.dt.form, gamma);
        out.gamma_basis = basis.basis;
        out.gamma_orders = basis.orders;
        for (const FqfElement& b : basis.basis) out.gamma_images.push_back(graph.at(b));
    }
    return out;
}

std::vector<GluingDatum> enumerate_gluings(const Lattice& t, const Lattice& k,
                                           const FiniteQuadraticForm& target_q, long limit) {
    SplitContext ctx(t, k);
    const FiniteQuadraticForm& qt = ctx.dt.form;
    const FiniteQuadraticForm& qk = ctx.dk.form;

    std::vector<GluingDatum> out;
    Int dm_order = ctx.dm.form.order();
    Int tgt = target_q.order();
    if (dm_order % tgt != 0) return out;
    Int h2 = dm_order / tgt;
    Int hsize;
    mpz_sqrt(hsize.get_mpz_t(), h2.get_mpz_t());
    if (hsize * hsize != h2) return out;

    std::vector<FqfElement> k_elems = all_elements(qk, limit);

    for (const FqfSubgroup& gamma : all_subgroups(qt, limit)) {
        if (Int(long(gamma.order())) != hsize) continue;
        SubgroupBasis basis = subgroup_basis(qt, gamma);
        std::size_t s = basis.basis.size();

        std::vector<std::vector<FqfElement>> cands(s);
        for (std::size_t i = 0; i < s; ++i) {
            Rat want_q = mod_2z(-qt.q_of(basis.basis[i]));
            for (const FqfElement& y : k_elems) {
                if (basis.orders[i] % qk.element_order(y) != 0) continue;
                if (qk.q_of(y) != want_q) continue;
                cands[i].push_back(y);
            }
        }

        std::vector<FqfElement> images(s);
        auto rec = [&](auto&& self, std::size_t i) -> void {
            if (i == s) {
                FqfSubgroup img = subgroup_closure(qk, images);
                if (img.order() != gamma.order()) return; // not injective

                GluingDatum datum;
                datum.gamma_basis = basis.basis;
                datum.gamma_orders = basis.orders;
                datum.gamma_images = images;

                // walk all coefficient tuples to list the graph pairs
                std::vector<long> c(s, 0);
                std::vector<FqfElement> chain_elems;
                for (;;) {
                    FqfElement x = qt.zero(), y = qk.zero();
                    for (std::size_t a = 0; a < s; ++a) {
                        if (c[a] == 0) continue;
                        x = qt.add(x, qt.scale(c[a], basis.basis[a]));
                        y = qk.add(y, qk.scale(c[a], images[a]));
                    }
                    datum.pairs.emplace_back(x, y);
                    FqfElement e = ctx.chain_class(x, y);
                    if (ctx.dm.form.q_of(e) != 0) throw Error("gluing candidate is not isotropic");
                    chain_elems.push_back(std::move(e));
                    std::size_t a = s;
                    while (a > 0) {
                        if (++c[a - 1] < basis.orders[a - 1]) break;
                        c[a - 1] = 0;
                        --a;
                    }
                    if (a == 0) break;
                    if (s == 0) break;
                }
                std::vector<FqfElement> gen_elems;
                for (std::size_t a = 0; a < s; ++a)
                    gen_elems.push_back(ctx.chain_class(basis.basis[a], images[a]));
                datum.h = subgroup_closure(ctx.dm.form, gen_elems);
                if (datum.h.order() != gamma.order())
                    throw Error("gluing subgroup closure has unexpected order");
                std::sort(datum.pairs.begin(), datum.pairs.end());

                OverlatticeResult res = glue(ctx.m, ctx.dm, datum.h);
                FiniteQuadraticForm quo = discriminant_form(res.lattice).form;
                if (fqf_isomorphic(quo, target_q, limit)) out.push_back(std::move(datum));
                return;
            }
            for (const FqfElement& y : cands[i]) {
                bool ok = true;
                for (std::size_t j = 0; j < i && ok; ++j)
                    if (qk.b_of(y, images[j]) != mod_z(-qt.b_of(basis.basis[i], basis.basis[j])))
                        ok = false;
                if (!ok) continue;
                images[i] = y;
                self(self, i + 1);
            }
        };
        rec(rec, 0);
    }

    std::sort(out.begin(), out.end(), [](const GluingDatum& a, const GluingDatum& b) {
        if (a.h.order() != b.h.order()) return a.h.order() < b.h.order();
        return a.h.elements < b.h.elements;
    });
    return out;
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
    std::size_t roots() {
        std::set<std::size_t> r;
        for (std::size_t i = 0; i < parent.size(); ++i) r.insert(find(i));
        return r.size();
    }
};

} // namespace

long double_orbit_count(const FiniteQuadraticForm& q, const std::vector<FqfAut>& elements,
                        const std::vector<FqfAut>& left_gens,
                        const std::vector<FqfAut>& right_gens) {
    std::map<FqfAut, std::size_t> index;
    for (std::size_t i = 0; i < elements.size(); ++i) index[elements[i]] = i;
    UnionFind uf(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) {
        for (const FqfAut& g : left_gens) {
            auto it = index.find(compose_auts(q, g, elements[i]));
            if (it == index.end())
                throw PreconditionError("NotClosed: left action leaves the element list");
            uf.unite(i, it->second);
        }
        for (const FqfAut& h : right_gens) {
            auto it = index.find(compose_auts(q, elements[i], h));
            if (it == index.end())
                throw PreconditionError("NotClosed: right action leaves the element list");
            uf.unite(i, it->second);
        }
    }
    return long(uf.roots());
}

long count_gluing_orbits(const FiniteQuadraticForm& d_t, const FiniteQuadraticForm& d_k,
                         const std::vector<GluingDatum>& gluings,
                         const std::vector<FqfAut>& left_gens_on_t,
                         const std::vector<FqfAut>& right_gens_on_k) {
    using Key = std::vector<std::pair<FqfElement, FqfElement>>;
    std::map<Key, std::size_t> index;
    for (std::size_t i = 0; i < gluings.size(); ++i) index[gluings[i].pairs] = i;

    auto mapped = [&](const GluingDatum& d, const FqfAut* a, const FqfAut* b) {
        Key out;
        for (const auto& [x, y] : d.pairs)
            out.emplace_back(a ? apply_aut(d_t, *a, x) : x, b ? apply_aut(d_k, *b, y) : y);
        std::sort(out.begin(), out.end());
        return out;
    };

    UnionFind uf(gluings.size());
    for (std::size_t i = 0; i < gluings.size(); ++i) {
        for (const FqfAut& g : left_gens_on_t) {
            auto it = index.find(mapped(gluings[i], &g, nullptr));
            if (it == index.end())
                throw PreconditionError("NotClosed: O(D_T) action leaves the gluing list");
            uf.unite(i, it->second);
        }
        for (const FqfAut& h : right_gens_on_k) {
            auto it = index.find(mapped(gluings[i], nullptr, &h));
            if (it == index.end())
                throw PreconditionError("NotClosed: O(D_K) action leaves the gluing list");
            uf.unite(i, it->second);
        }
    }
    return long(uf.roots());
}

std::vector<std::pair<GluingDatum, GluingDatum>> transfer_gluings(const Lattice& t,
                                                                  const Lattice& k,
                                                                  const Lattice& k_prime,
                                                                  const Lattice& l, long limit) {
    if (!same_genus(k, k_prime, limit))
        throw PreconditionError("GenusMismatch: K and K' are not in the same genus");
    if (nikulin_unique_in_genus(l) != GenusUniqueness::Yes)
        throw PreconditionError("UniquenessUnknown: overlattice genus has no uniqueness certificate");

    DiscriminantForm dk = discriminant_form(k);
    DiscriminantForm dk2 = discriminant_form(k_prime);
    auto phi = fqf_isomorphic(dk.form, dk2.form, limit);
    if (!phi) throw Error("transfer: same-genus lattices without a form isomorphism");

    FiniteQuadraticForm target = discriminant_form(l).form;
    std::vector<GluingDatum> ga = enumerate_gluings(t, k, target, limit);
    std::vector<GluingDatum> gb = enumerate_gluings(t, k_prime, target, limit);
    if (ga.size() != gb.size()) throw Error("transfer: gluing counts disagree");

    using Key = std::vector<std::pair<FqfElement, FqfElement>>;
    std::map<Key, std::size_t> index;
    for (std::size_t i = 0; i < gb.size(); ++i) index[gb[i].pairs] = i;

    std::vector<std::pair<GluingDatum, GluingDatum>> out;
    for (const GluingDatum& a : ga) {
        Key key;
        for (const auto& [x, y] : a.pairs) key.emplace_back(x, apply_aut(dk2.form, *phi, y));
        std::sort(key.begin(), key.end());
        auto it = index.find(key);
        if (it == index.end()) throw Error("transfer: matched gluing not found");
        out.emplace_back(a, gb[it->second]);
    }
    return out;
}

} // namespace latfm
