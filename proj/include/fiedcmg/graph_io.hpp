#pragma once

#include <filesystem>
#include <functional>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fiedcmg/laplacian.hpp"

namespace fiedcmg {

enum class GraphFormat { Auto, MatrixMarket, EdgeListText };

// Parse failure; what() carries "<source>:<line>: <reason>".
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& reason);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

using WarningSink = std::function<void(std::string_view)>;

// Writes "warning: <msg>" to stderr.
void warn_to_stderr(std::string_view msg);

GraphFormat parse_format(std::string_view name);

// Matrix Market coordinate files (real/integer/pattern, symmetric/general)
// or whitespace edge lists "i j [w]" with an optional "# n=<count>" line.
// Ids are 1-based on disk. A Matrix Market file with negative off-diagonals
// is read as a Laplacian and negated back to adjacency weights.
//
// Entries mirrored across the diagonal ((i,j) and (j,i)) describe one edge and
// must agree to 1e-9 relative; repeated entries with the same orientation are
// parallel edges and their weights add. Self-loops are dropped with a warning.
EdgeList load_graph(const std::filesystem::path& path, GraphFormat format = GraphFormat::Auto,
                    const WarningSink& warn = warn_to_stderr);

EdgeList read_matrix_market(std::istream& in, const std::string& source,
                            const WarningSink& warn = warn_to_stderr);
EdgeList read_edge_list(std::istream& in, const std::string& source,
                        const WarningSink& warn = warn_to_stderr);

// Symmetric real coordinate file holding the strictly lower adjacency triangle.
void write_matrix_market(std::ostream& out, const EdgeList& g);

// Raw little-endian float64 array.
void write_vector_f64(const std::filesystem::path& path, std::span<const double> x);
Vector read_vector_f64(const std::filesystem::path& path);

}  // namespace fiedcmg
