#pragma once

#include <string>

#include "spectralset/types.hpp"

namespace spectralset {

/// Parse the matrix JSON schema {"n": 2, "re": [[..]], "im": [[..]]} into an
/// operator. `context` names the source (path or "<stdin>") in error messages.
Operator parse_matrix_json(const std::string& text, const std::string& context);

/// Serialize a matrix to the same schema, full double precision, fixed field
/// order (round trips are bit exact).
std::string matrix_to_json(const Matrix& m);

Operator read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const Matrix& m);

/// Write via a temporary sibling file and rename, so readers never observe a
/// half-written file.
void atomic_write_text(const std::string& path, const std::string& text);

}  // namespace spectralset
