#include "latticefm/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace latfm {

using nlohmann::json;

namespace {

Int int_from_json(const json& v) {
    if (v.is_number_integer()) return Int(static_cast<long>(v.get<long long>()));
    if (v.is_string()) {
        Int x;
        if (mpz_set_str(x.get_mpz_t(), v.get<std::string>().c_str(), 10) != 0)
            throw ParseError("bad integer literal: " + v.get<std::string>());
        return x;
    }
    throw ParseError("Gram entries must be integers or integer strings");
}

json int_to_json(const Int& x) {
    if (x.fits_slong_p()) return json(x.get_si());
    return json(x.get_str());
}

Lattice lattice_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("gram"))
        throw ParseError("lattice file needs a \"gram\" field");
    const json& gram = doc["gram"];
    if (!gram.is_array()) throw ParseError("\"gram\" must be an array of rows");
    std::size_t n = gram.size();
    IntMat m(n, gram.empty() ? 0 : gram[0].size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!gram[i].is_array() || gram[i].size() != m.cols())
            throw ParseError("\"gram\" must be a rectangular array");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = int_from_json(gram[i][j]);
    }
    std::string name = doc.value("name", std::string());
    return Lattice(m, name);
}

} // namespace

Lattice lattice_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("JSON parse error: ") + e.what());
    }
    if (doc.is_array()) {
        // bare Gram matrix
        json wrapped;
        wrapped["gram"] = doc;
        return lattice_from_json(wrapped);
    }
    return lattice_from_json(doc);
}

std::string lattice_to_json_text(const Lattice& l) {
    json doc;
    if (!l.label().empty()) doc["name"] = l.label();
    json gram = json::array();
    for (std::size_t i = 0; i < l.rank(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < l.rank(); ++j) row.push_back(int_to_json(l.gram()(i, j)));
        gram.push_back(row);
    }
    doc["gram"] = gram;
    return doc.dump(2);
}

Lattice read_lattice_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open lattice file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return lattice_from_json_text(buf.str());
}

void write_lattice_file(const Lattice& l, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write lattice file: " + path);
    out << lattice_to_json_text(l) << "\n";
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    std::size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

// split on top-level commas (not inside parentheses or brackets)
std::vector<std::string> split_args(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[' || c == '<') ++depth;
        if (c == ')' || c == ']' || c == '>') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return in.good();
}

} // namespace

Lattice lattice_from_spec(const std::string& raw) {
    std::string spec = trim(raw);
    if (spec.empty()) throw ParseError("empty lattice spec");
    if (spec.front() == '[' || spec.front() == '{') return lattice_from_json_text(spec);
    if (spec.rfind("diag(", 0) == 0 && spec.back() == ')') {
        std::vector<std::string> parts = split_args(spec.substr(5, spec.size() - 6));
        IntMat g(parts.size(), parts.size());
        for (std::size_t i = 0; i < parts.size(); ++i) {
            Int x;
            if (mpz_set_str(x.get_mpz_t(), parts[i].c_str(), 10) != 0)
                throw ParseError("bad diagonal entry: " + parts[i]);
            g(i, i) = x;
        }
        return Lattice(g, spec);
    }
    if (spec.rfind("sum(", 0) == 0 && spec.back() == ')') {
        std::vector<std::string> parts = split_args(spec.substr(4, spec.size() - 5));
        if (parts.empty()) throw ParseError("sum() needs at least one part");
        std::vector<Lattice> lats;
        for (const std::string& p : parts) lats.push_back(lattice_from_spec(p));
        return direct_sum(lats);
    }
    if (file_exists(spec)) return read_lattice_file(spec);
    return standard_lattice(spec);
}

std::vector<IntVec> parse_vector_list(const std::string& text, std::size_t expected_len) {
    std::vector<IntVec> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) {
        part = trim(part);
        if (part.empty()) continue;
        std::vector<std::string> items = split_args(part);
        if (items.size() != expected_len)
            throw ParseError("vector has " + std::to_string(items.size()) + " entries, expected " +
                             std::to_string(expected_len));
        IntVec v(items.size());
        for (std::size_t i = 0; i < items.size(); ++i)
            if (mpz_set_str(v[i].get_mpz_t(), items[i].c_str(), 10) != 0)
                throw ParseError("bad integer: " + items[i]);
        out.push_back(std::move(v));
    }
    return out;
}

std::string rat_to_string(const Rat& x) { return x.get_str(); }

} // namespace latfm
