#pragma once

#include <string>
#include <vector>

#include "symloop/dpw.hpp"
#include "symloop/geometry.hpp"
#include "symloop/symmetry.hpp"

// JSON and CSV exchange formats. Matrices are row-major nested arrays split
// into "re" and "im"; CSV numbers carry 17 significant digits.
namespace symloop::io {

// {"n": n, "sample_count": K, "coeffs": [{"degree": m, "re": [[...]], "im": [[...]]}, ...]}
std::string loop_to_json(const MatrixLoop& loop);
MatrixLoop loop_from_json(const std::string& text);

// {"n": n, "terms": [{"power": p, "zdegree": d, "re": [[...]], "im": [[...]]}, ...]}
std::string potential_to_json(const Potential& mu);
Potential potential_from_json(const std::string& text);

std::string factorization_to_json(const FactorizationResult& f);
std::string flag_to_json(const FlagPoint& flag);
std::string decomposition_to_json(const KSymmetricDecomposition& d);
// Vertex labels, arrow matrix and measured residuals.
std::string diagram_to_json(const Diagram& d, const DiagramCheck& check);

// One row per (degree, grid point): degree, ix, iy, x, y, then re/im of each entry.
std::string loop_field_to_csv(const LoopField& field);
// One row per grid point: ix, iy, x, y, rank, then re/im of each entry.
std::string projector_field_to_csv(const ProjectorField& field);

// printf-style %.17g.
std::string format_number(double x);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);

MatrixLoop read_loop(const std::string& path);
Potential read_potential(const std::string& path);

}  // namespace symloop::io
