#pragma once

#include <string>
#include <vector>

#include "latticefm/discform.hpp"

namespace latfm {

// Lattice files are JSON: {"name": ..., "gram": [[...], ...], "basis_labels": [...]}.
// Gram entries are JSON integers, or strings for values beyond 2^53.
Lattice lattice_from_json_text(const std::string& text);
std::string lattice_to_json_text(const Lattice& l);
Lattice read_lattice_file(const std::string& path);
void write_lattice_file(const Lattice& l, const std::string& path);

// Accepted forms: a standard name (U, E8(-1), K3, L2d(7), <-2>, ...), diag(a,b,...),
// sum(spec,spec,...), inline JSON, or a path to a lattice file.
Lattice lattice_from_spec(const std::string& spec);

// "1,0,2; 0,1,0" -> integer vectors of the given length
std::vector<IntVec> parse_vector_list(const std::string& text, std::size_t expected_len);

std::string rat_to_string(const Rat& x);

} // namespace latfm
