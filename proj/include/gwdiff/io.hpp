#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gwdiff/chain.hpp"
#include "gwdiff/evolution.hpp"
#include "gwdiff/forest.hpp"
#include "gwdiff/matrix.hpp"
#include "gwdiff/stochastic.hpp"

namespace gwdiff::io {

// Matrix text format: one row per line, comma-separated entries, blank
// lines and lines starting with '#' ignored.
Matrix parse_matrix(std::istream& in);
Matrix parse_matrix_file(const std::string& path);

// Edge list: "i j w" per line, 0-based indices, weights > 0.
AffinityMatrix parse_edge_list(std::istream& in, bool undirected);
AffinityMatrix parse_edge_list_file(const std::string& path, bool undirected);

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

void write_matrix(std::ostream& out, const Matrix& m,
                  const std::vector<std::string>& comments = {});
void write_matrix_file(const std::string& path, const Matrix& m,
                       const std::vector<std::string>& comments = {});

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace);

using SummaryItems = std::vector<std::pair<std::string, std::string>>;
void write_summary(std::ostream& out, const SummaryItems& items);

SummaryItems analysis_summary(const ChainClassification& c,
                              const StationaryResult* pi,
                              const SpectrumSummary* spectrum);

void write_empirical_law(std::ostream& out, const EmpiricalLaw& law,
                         const std::string& mechanism);

}  // namespace gwdiff::io
