#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "latticefm/io.hpp"
#include "latticefm/k3.hpp"

using json = nlohmann::json;
using namespace latfm;

namespace {

// Exit-code contract: 0 success/true, 1 semantic false or failed check,
// 2 parse error, 3 validation error, 4 precondition violation.
constexpr int kExitFalse = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitPrecondition = 4;

struct Options {
    std::string format = "text";
    long limit = kDefaultGroupLimit;
};

void emit(const Options& opt, const json& doc) {
    if (opt.format == "json") {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::function<void(const json&, int)> walk = [&](const json& node, int indent) {
        std::string pad(std::size_t(indent) * 2, ' ');
        if (node.is_object()) {
            for (auto it = node.begin(); it != node.end(); ++it) {
                if (it.value().is_object() || it.value().is_array()) {
                    std::cout << pad << it.key() << ":\n";
                    walk(it.value(), indent + 1);
                } else {
                    std::cout << pad << it.key() << ": " << it.value().dump() << "\n";
                }
            }
        } else if (node.is_array()) {
            for (const json& item : node) {
                if (item.is_object() || item.is_array()) {
                    std::cout << pad << "-\n";
                    walk(item, indent + 1);
                } else {
                    std::cout << pad << "- " << item.dump() << "\n";
                }
            }
        } else {
            std::cout << pad << node.dump() << "\n";
        }
    };
    walk(doc, 0);
}

json gram_to_json(const IntMat& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Int& x = m(i, j);
            if (x.fits_slong_p())
                row.push_back(x.get_si());
            else
                row.push_back(x.get_str());
        }
        rows.push_back(row);
    }
    return rows;
}

json form_to_json(const FiniteQuadraticForm& q) {
    json doc;
    doc["invariant_factors"] = q.invariant_factors();
    json qv = json::array();
    for (std::size_t i = 0; i < q.gens(); ++i) qv.push_back(q.gen_q(i).get_str());
    doc["q_values"] = qv;
    doc["order"] = q.order().get_str();
    doc["min_generators"] = q.gens();
    return doc;
}

json subgroup_to_json(const FqfSubgroup& h) {
    json doc;
    doc["order"] = h.order();
    json gens = json::array();
    for (const FqfElement& g : h.gens) gens.push_back(g);
    doc["generators"] = gens;
    json elems = json::array();
    for (const FqfElement& e : h.elements) elems.push_back(e);
    doc["elements"] = elems;
    return doc;
}

IntVec parse_one_vector(const std::string& text, std::size_t len) {
    std::vector<IntVec> vs = parse_vector_list(text, len);
    if (vs.size() != 1) throw ParseError("expected a single vector");
    return vs[0];
}

IntMat columns_from_vectors(const std::vector<IntVec>& vs) {
    if (vs.empty()) throw ParseError("expected at least one vector");
    IntMat m(vs[0].size(), vs.size());
    for (std::size_t j = 0; j < vs.size(); ++j)
        for (std::size_t i = 0; i < vs[0].size(); ++i) m(i, j) = vs[j][i];
    return m;
}

std::vector<FqfAut> auts_from_spec(const FiniteQuadraticForm& q, const json& spec) {
    if (spec.is_string()) {
        std::string s = spec.get<std::string>();
        if (s == "pm" || s == "pm_id") return {negation_aut(q)};
        if (s == "id") return {identity_aut(q)};
        throw ParseError("unknown automorphism spec: " + s);
    }
    std::vector<FqfAut> out;
    for (const json& a : spec) {
        FqfAut aut;
        for (const json& img : a) aut.push_back(q.reduce(img.get<std::vector<long>>()));
        if (!is_automorphism(q, aut))
            throw PreconditionError("listed map is not an automorphism of the form");
        out.push_back(aut);
    }
    return out;
}

int cmd_disc_form(const Options& opt, const std::string& spec) {
    Lattice l = lattice_from_spec(spec);
    DiscriminantForm df = discriminant_form(l);
    json doc;
    doc["command"] = "disc-form";
    doc["lattice"] = l.label().empty() ? spec : l.label();
    doc["results"] = form_to_json(df.form);
    json lifts = json::array();
    for (std::size_t i = 0; i < df.form.gens(); ++i) {
        json col = json::array();
        for (std::size_t r = 0; r < l.rank(); ++r) col.push_back(df.lifts(r, i).get_str());
        lifts.push_back(col);
    }
    doc["results"]["generator_lifts"] = lifts;
    doc["notes"] = json::array({"q-values are stored in [0,2); subtract 2 for negative "
                                "representatives"});
    emit(opt, doc);
    return 0;
}

int cmd_same_genus(const Options& opt, const std::string& s1, const std::string& s2) {
    Lattice l1 = lattice_from_spec(s1);
    Lattice l2 = lattice_from_spec(s2);
    json doc;
    doc["command"] = "same-genus";
    bool sig_eq = signature(l1) == signature(l2);
    bool form_eq =
        sig_eq && fqf_isomorphic(discriminant_form(l1).form, discriminant_form(l2).form, opt.limit)
                      .has_value();
    doc["results"]["signatures_equal"] = sig_eq;
    doc["results"]["forms_isomorphic"] = form_eq;
    bool same = sig_eq && form_eq;
    doc["results"]["same_genus"] = same;
    if (!same)
        doc["results"]["reason"] = !sig_eq ? "signatures differ" : "discriminant forms differ";
    emit(opt, doc);
    return same ? 0 : kExitFalse;
}

int cmd_signature(const Options& opt, const std::string& spec) {
    Lattice l = lattice_from_spec(spec);
    Signature sig = signature(l);
    json doc;
    doc["command"] = "signature";
    doc["results"]["plus"] = sig.plus;
    doc["results"]["minus"] = sig.minus;
    doc["results"]["rank"] = sig.rank();
    doc["results"]["determinant"] = l.det().get_str();
    emit(opt, doc);
    return 0;
}

int cmd_complement(const Options& opt, const std::string& spec, const std::string& vectors,
                   const std::string& out_path) {
    Lattice l = lattice_from_spec(spec);
    IntMat cols = columns_from_vectors(parse_vector_list(vectors, l.rank()));
    Embedding e = span_embedding(l, cols);
    Embedding comp = orthogonal_complement(e);
    json doc;
    doc["command"] = "complement";
    doc["results"]["rank"] = comp.domain().rank();
    doc["results"]["gram"] = gram_to_json(comp.domain().gram());
    doc["results"]["determinant"] = comp.domain().det().get_str();
    doc["results"]["basis_in_ambient"] = gram_to_json(comp.matrix());
    doc["results"]["primitive"] = is_primitive(comp);
    if (!out_path.empty()) write_lattice_file(comp.domain(), out_path);
    emit(opt, doc);
    return 0;
}

int cmd_primitive_check(const Options& opt, const std::string& spec, const std::string& vectors) {
    Lattice l = lattice_from_spec(spec);
    IntMat cols = columns_from_vectors(parse_vector_list(vectors, l.rank()));
    Embedding e = span_embedding(l, cols);
    bool prim = is_primitive(e);
    json doc;
    doc["command"] = "primitive-check";
    doc["results"]["primitive"] = prim;
    // index of the image inside its primitive hull, from the determinant ratio
    Embedding hull = primitive_hull(e);
    Int ratio = abs(det_exact(e.domain().gram())) / abs(det_exact(hull.domain().gram()));
    Int idx;
    mpz_sqrt(idx.get_mpz_t(), ratio.get_mpz_t());
    doc["results"]["hull_index"] = idx.get_str();
    emit(opt, doc);
    return prim ? 0 : kExitFalse;
}

int cmd_divisor(const Options& opt, const std::string& spec, const std::string& vector) {
    Lattice l = lattice_from_spec(spec);
    IntVec v = parse_one_vector(vector, l.rank());
    json doc;
    doc["command"] = "divisor";
    doc["results"]["divisor"] = divisor(l, v).get_str();
    doc["results"]["primitive_vector"] = is_primitive_vector(l, v);
    emit(opt, doc);
    return 0;
}

int cmd_represents(const Options& opt, const std::string& spec, long n, long bound) {
    Lattice l = lattice_from_spec(spec);
    RepresentResult r = represents(l, Int(n), bound);
    json doc;
    doc["command"] = "represents";
    doc["results"]["target"] = n;
    switch (r.status) {
    case RepresentResult::Status::Witness: {
        json w = json::array();
        for (const Int& x : r.witness) w.push_back(x.get_str());
        doc["results"]["status"] = "witness";
        doc["results"]["witness"] = w;
        doc["results"]["primitive"] = r.witness_primitive;
        break;
    }
    case RepresentResult::Status::ObstructedMod:
        doc["results"]["status"] = "obstructed";
        doc["results"]["modulus"] = r.obstruction_modulus.get_str();
        break;
    case RepresentResult::Status::NotFound:
        doc["results"]["status"] = "not-found";
        doc["results"]["complete"] = r.complete;
        doc["results"]["guarantee"] =
            r.complete ? "definite lattice, finite search exhausted: proof of non-representation"
                       : "no witness with |coordinates| <= " + std::to_string(r.coefficient_bound) +
                             "; no congruence obstruction among scanned moduli (largest " +
                             r.largest_scanned_modulus.get_str() + ")";
        break;
    }
    emit(opt, doc);
    return r.found() ? 0 : kExitFalse;
}

int cmd_glue(const Options& opt, const std::string& spec, const std::string& generators,
             const std::string& coord_type, const std::string& out_path) {
    Lattice l = lattice_from_spec(spec);
    DiscriminantForm df = discriminant_form(l);
    std::vector<FqfElement> gens;
    if (!generators.empty()) {
        if (coord_type == "disc") {
            std::vector<IntVec> vs = parse_vector_list(generators, df.form.gens());
            for (const IntVec& v : vs) {
                std::vector<long> coords(v.size());
                for (std::size_t i = 0; i < v.size(); ++i) coords[i] = v[i].get_si();
                gens.push_back(df.form.reduce(coords));
            }
        } else if (coord_type == "lift") {
            // rational lift coordinates a/b separated by commas
            std::stringstream ss(generators);
            std::string part;
            while (std::getline(ss, part, ';')) {
                std::stringstream ps(part);
                std::string item;
                RatVec w;
                while (std::getline(ps, item, ',')) {
                    Rat x;
                    if (mpq_set_str(x.get_mpq_t(), item.c_str(), 10) != 0)
                        throw ParseError("bad rational: " + item);
                    x.canonicalize();
                    w.push_back(x);
                }
                if (w.size() != l.rank()) throw ParseError("lift has wrong length");
                gens.push_back(class_of_dual_vector(l, df, w));
            }
        } else {
            throw ParseError("coord-type must be disc or lift");
        }
    }
    FqfSubgroup h = subgroup_closure(df.form, gens);
    OverlatticeResult res = glue(l, df, h);
    json doc;
    doc["command"] = "glue";
    doc["results"]["index"] = res.index.get_str();
    doc["results"]["gram"] = gram_to_json(res.lattice.gram());
    doc["results"]["determinant"] = res.lattice.det().get_str();
    doc["results"]["embedding"] = gram_to_json(res.embedding.matrix());
    if (!out_path.empty()) write_lattice_file(res.lattice, out_path);
    emit(opt, doc);
    return 0;
}

int cmd_classify(const Options& opt, const std::string& domain_spec,
                 const std::string& ambient_spec, const std::string& matrix) {
    Lattice domain = lattice_from_spec(domain_spec);
    Lattice ambient = lattice_from_spec(ambient_spec);
    IntMat cols = columns_from_vectors(parse_vector_list(matrix, ambient.rank()));
    Embedding e(domain, ambient, cols);
    FqfSubgroup h = classifying_subgroup(e);
    json doc;
    doc["command"] = "classify";
    doc["results"] = subgroup_to_json(h);
    emit(opt, doc);
    return 0;
}

int cmd_gluings(const Options& opt, const std::string& t_spec, const std::string& k_spec,
                const std::string& target_spec) {
    Lattice t = lattice_from_spec(t_spec);
    Lattice k = lattice_from_spec(k_spec);
    FiniteQuadraticForm target;
    if (!target_spec.empty()) target = discriminant_form(lattice_from_spec(target_spec)).form;
    std::vector<GluingDatum> gl = enumerate_gluings(t, k, target, opt.limit);
    json doc;
    doc["command"] = "gluings";
    doc["results"]["count"] = gl.size();
    json items = json::array();
    for (const GluingDatum& g : gl) {
        json item;
        item["order"] = g.h.order();
        json basis = json::array(), images = json::array();
        for (const FqfElement& b : g.gamma_basis) basis.push_back(b);
        for (const FqfElement& y : g.gamma_images) images.push_back(y);
        item["gamma_basis"] = basis;
        item["gamma_orders"] = g.gamma_orders;
        item["gamma_images"] = images;
        items.push_back(item);
    }
    doc["results"]["gluings"] = items;
    emit(opt, doc);
    return 0;
}

int cmd_orbit_count(const Options& opt, const std::string& spec, const std::string& left,
                    const std::string& right) {
    Lattice l = lattice_from_spec(spec);
    FiniteQuadraticForm q = discriminant_form(l).form;
    std::vector<FqfAut> group = orthogonal_group(q, opt.limit);
    auto side = [&](const std::string& s) -> std::vector<FqfAut> {
        if (s == "pm") return {negation_aut(q)};
        if (s == "id") return {identity_aut(q)};
        if (s == "full") return group;
        throw ParseError("side spec must be pm, id or full");
    };
    long orbits = double_orbit_count(q, group, side(left), side(right));
    json doc;
    doc["command"] = "orbit-count";
    doc["results"]["aut_order"] = group.size();
    doc["results"]["orbits"] = orbits;
    emit(opt, doc);
    return 0;
}

int cmd_fm_count(const Options& opt, long rank_one_d, const std::string& input_path) {
    json doc;
    doc["command"] = "fm-count";
    if (rank_one_d > 0) {
        Int count = fm_count_rank_one(rank_one_d, opt.limit);
        doc["results"]["degree"] = rank_one_d;
        doc["results"]["count"] = count.get_str();
        doc["results"]["formula"] = oguiso_count(rank_one_d).get_str();
        emit(opt, doc);
        return 0;
    }
    std::ifstream in(input_path);
    if (!in) throw ParseError("cannot open fm-count input: " + input_path);
    json spec;
    try {
        in >> spec;
    } catch (const json::exception& e) {
        throw ParseError(std::string("JSON parse error: ") + e.what());
    }
    std::vector<FmEntry> entries;
    for (const json& e : spec.at("entries")) {
        std::string label = e.value("label", "S" + std::to_string(entries.size() + 1));
        if (e.contains("s") && e.value("os_image", json("auto")) == json("auto")) {
            Lattice s = lattice_from_spec(e["s"].get<std::string>());
            s.set_label(label);
            FmEntry entry = fm_entry_from_definite(s);
            if (e.contains("hodge_image"))
                entry.hodge_image = auts_from_spec(entry.disc, e["hodge_image"]);
            entries.push_back(std::move(entry));
            continue;
        }
        std::string source = e.contains("s") ? e["s"].get<std::string>()
                                             : e.at("disc_of").get<std::string>();
        FiniteQuadraticForm disc = discriminant_form(lattice_from_spec(source)).form;
        std::vector<FqfAut> os = auts_from_spec(disc, e.value("os_image", json("pm")));
        std::vector<FqfAut> hodge = auts_from_spec(disc, e.value("hodge_image", json("pm")));
        entries.push_back(fm_entry_manual(label, disc, std::move(os), std::move(hodge)));
    }
    FmCountResult res = fm_count_general(entries, opt.limit);
    doc["results"]["count"] = res.total.get_str();
    json breakdown = json::array();
    for (const auto& [label, orbits] : res.breakdown)
        breakdown.push_back(json{{"label", label}, {"orbits", orbits}});
    doc["results"]["breakdown"] = breakdown;
    emit(opt, doc);
    return 0;
}

int cmd_eichler(const Options& opt, const std::string& spec, const std::string& vector) {
    Lattice l = lattice_from_spec(spec);
    IntVec v = parse_one_vector(vector, l.rank());
    DiscriminantForm df = discriminant_form(l);
    EichlerInvariant inv = eichler_invariant(l, df, v);
    json doc;
    doc["command"] = "eichler";
    doc["results"]["length"] = inv.length.get_str();
    doc["results"]["class"] = inv.cls;
    doc["results"]["divisor"] = divisor(l, v).get_str();
    emit(opt, doc);
    return 0;
}

int cmd_paper_suite(const Options& opt, const std::string& filter, bool inject_failure) {
    std::vector<ReportClaim> claims = run_paper_suite(filter, inject_failure);
    json doc;
    doc["command"] = "paper-suite";
    json items = json::array();
    bool all = true;
    for (const ReportClaim& c : claims) {
        json item;
        item["id"] = c.id;
        item["topic"] = c.topic;
        item["description"] = c.description;
        item["pass"] = c.pass;
        if (!c.detail.empty()) item["detail"] = c.detail;
        items.push_back(item);
        if (!c.pass) all = false;
    }
    doc["results"]["claims"] = items;
    doc["results"]["total"] = claims.size();
    doc["results"]["all_pass"] = all;
    if (opt.format == "text") {
        for (const ReportClaim& c : claims)
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.id << "  " << c.description
                      << (c.detail.empty() ? "" : "  [" + c.detail + "]") << "\n";
        std::cout << (all ? "all " : "NOT all ") << claims.size() << " claims passed\n";
    } else {
        emit(opt, doc);
    }
    return all ? 0 : kExitFalse;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact lattice arithmetic, discriminant forms, gluing and partner counting"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    if (const char* env = std::getenv("LATTICE_FM_LIMIT")) opt.limit = std::atol(env);
    app.add_option("--format", opt.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--limit", opt.limit, "group-size cap for enumerations");

    std::string arg_lattice, arg_lattice2, arg_vectors, arg_vector, arg_out, arg_target;
    std::string arg_matrix, arg_domain, arg_ambient, arg_coord_type = "disc", arg_generators;
    std::string arg_left = "pm", arg_right = "pm", arg_filter, arg_input;
    long arg_n = 0, arg_bound = 100, arg_rank_one = 0;
    bool arg_inject = false;

    CLI::App* disc = app.add_subcommand("disc-form", "discriminant group and quadratic form");
    disc->add_option("lattice", arg_lattice)->required();

    CLI::App* genus = app.add_subcommand("same-genus", "test signature and discriminant form");
    genus->add_option("lattice1", arg_lattice)->required();
    genus->add_option("lattice2", arg_lattice2)->required();

    CLI::App* sig = app.add_subcommand("signature", "exact signature by congruence");
    sig->add_option("lattice", arg_lattice)->required();

    CLI::App* comp = app.add_subcommand("complement", "orthogonal complement of a span");
    comp->add_option("lattice", arg_lattice)->required();
    comp->add_option("--vectors", arg_vectors, "spanning vectors, ; separated")->required();
    comp->add_option("--out", arg_out, "write complement lattice to file");

    CLI::App* prim = app.add_subcommand("primitive-check", "is the span a primitive sublattice");
    prim->add_option("lattice", arg_lattice)->required();
    prim->add_option("--vectors", arg_vectors)->required();

    CLI::App* divi = app.add_subcommand("divisor", "positive generator of (v, L)");
    divi->add_option("lattice", arg_lattice)->required();
    divi->add_option("--vector", arg_vector)->required();

    CLI::App* rep = app.add_subcommand("represents", "search for v with v^2 = n");
    rep->add_option("lattice", arg_lattice)->required();
    rep->add_option("n", arg_n)->required();
    rep->add_option("--bound", arg_bound, "coordinate bound for indefinite search");

    CLI::App* glue_cmd = app.add_subcommand("glue", "overlattice from an isotropic subgroup");
    glue_cmd->add_option("lattice", arg_lattice)->required();
    glue_cmd->add_option("--generators", arg_generators, "subgroup generators, ; separated");
    glue_cmd->add_option("--coord-type", arg_coord_type, "disc (default) or lift coordinates");
    glue_cmd->add_option("--out", arg_out, "write glued lattice to file");

    CLI::App* cls = app.add_subcommand("classify", "classifying subgroup of a finite-index embedding");
    cls->add_option("--domain", arg_domain)->required();
    cls->add_option("--ambient", arg_ambient)->required();
    cls->add_option("--matrix", arg_matrix, "columns = images of domain basis")->required();

    CLI::App* glu = app.add_subcommand("gluings", "enumerate gluing data for T and K");
    glu->add_option("t", arg_lattice)->required();
    glu->add_option("k", arg_lattice2)->required();
    glu->add_option("--target", arg_target, "lattice whose discriminant form is the target "
                                            "(default: trivial, i.e. unimodular overlattices)");

    CLI::App* orb = app.add_subcommand("orbit-count", "double orbit count on O(D_L)");
    orb->add_option("lattice", arg_lattice)->required();
    orb->add_option("--left", arg_left, "pm, id or full");
    orb->add_option("--right", arg_right, "pm, id or full");

    CLI::App* fm = app.add_subcommand("fm-count", "Fourier-Mukai partner counts");
    fm->add_option("--rank-one", arg_rank_one, "degree d for the rank-one count");
    fm->add_option("--input", arg_input, "JSON file with candidate complements");

    CLI::App* eich = app.add_subcommand("eichler", "orbit invariant (v^2, [v/div v])");
    eich->add_option("lattice", arg_lattice)->required();
    eich->add_option("--vector", arg_vector)->required();

    CLI::App* suite = app.add_subcommand("paper-suite", "reproduce the worked examples");
    suite->add_option("--filter", arg_filter, "restrict to claims whose id contains this string");
    suite->add_flag("--inject-failure", arg_inject)->group(""); // test hook, hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitParse;
    }

    try {
        if (disc->parsed()) return cmd_disc_form(opt, arg_lattice);
        if (genus->parsed()) return cmd_same_genus(opt, arg_lattice, arg_lattice2);
        if (sig->parsed()) return cmd_signature(opt, arg_lattice);
        if (comp->parsed()) return cmd_complement(opt, arg_lattice, arg_vectors, arg_out);
        if (prim->parsed()) return cmd_primitive_check(opt, arg_lattice, arg_vectors);
        if (divi->parsed()) return cmd_divisor(opt, arg_lattice, arg_vector);
        if (rep->parsed()) return cmd_represents(opt, arg_lattice, arg_n, arg_bound);
        if (glue_cmd->parsed())
            return cmd_glue(opt, arg_lattice, arg_generators, arg_coord_type, arg_out);
        if (cls->parsed()) return cmd_classify(opt, arg_domain, arg_ambient, arg_matrix);
        if (glu->parsed()) return cmd_gluings(opt, arg_lattice, arg_lattice2, arg_target);
        if (orb->parsed()) return cmd_orbit_count(opt, arg_lattice, arg_left, arg_right);
        if (fm->parsed()) {
            if (arg_rank_one <= 0 && arg_input.empty())
                throw ParseError("fm-count needs --rank-one or --input");
            return cmd_fm_count(opt, arg_rank_one, arg_input);
        }
        if (eich->parsed()) return cmd_eichler(opt, arg_lattice, arg_vector);
        if (suite->parsed()) return cmd_paper_suite(opt, arg_filter, arg_inject);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const LimitError& e) {
        std::cerr << "limit exceeded: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
