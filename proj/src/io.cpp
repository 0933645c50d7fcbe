#include "gwdiff/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace gwdiff::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view token, int line_no) {
    token = trim(token);
    if (token.empty()) throw ParseError("empty numeric field", line_no);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError("cannot parse number '" + std::string(token) + "'", line_no);
    return value;
}

long long parse_integer(std::string_view token, int line_no) {
    token = trim(token);
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw ParseError("cannot parse index '" + std::string(token) + "'", line_no);
    return value;
}

bool skippable(std::string_view line) {
    const auto t = trim(line);
    return t.empty() || t.front() == '#';
}

}  // namespace

Matrix parse_matrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    int first_row_line = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        std::vector<double> row;
        std::string_view rest = line;
        while (true) {
            const size_t comma = rest.find(',');
            row.push_back(parse_number(rest.substr(0, comma), line_no));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw RaggedRows("row has " + std::to_string(row.size()) + " entries, expected " +
                                 std::to_string(rows.front().size()),
                             line_no);
        if (rows.empty()) first_row_line = line_no;
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("no matrix rows found", line_no);
    if (rows.size() != rows.front().size())
        throw ParseError("matrix is " + std::to_string(rows.size()) + "x" +
                             std::to_string(rows.front().size()) + ", expected square",
                         first_row_line);
    Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return m;
}

Matrix parse_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return parse_matrix(in);
}

AffinityMatrix parse_edge_list(std::istream& in, bool undirected) {
    struct Edge {
        int i, j;
        double w;
    };
    std::vector<Edge> edges;
    long long max_index = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        std::istringstream fields(line);
        std::string si, sj, sw, extra;
        if (!(fields >> si >> sj >> sw))
            throw ParseError("expected 'i j w'", line_no);
        if (fields >> extra) throw ParseError("trailing field '" + extra + "'", line_no);
        const long long i = parse_integer(si, line_no);
        const long long j = parse_integer(sj, line_no);
        if (i < 0 || j < 0)
            throw IndexOutOfRange("negative vertex index at line " + std::to_string(line_no));
        if (i > 1000000 || j > 1000000)
            throw IndexOutOfRange("vertex index " + std::to_string(std::max(i, j)) +
                                  " too large for a dense matrix (limit 1000000)");
        const double w = parse_number(sw, line_no);
        if (!(w > 0.0)) throw NegativeWeight("edge weight must be positive", line_no);
        edges.push_back({static_cast<int>(i), static_cast<int>(j), w});
        max_index = std::max({max_index, i, j});
    }
    if (edges.empty()) throw ParseError("no edges found", line_no);
    const int n = static_cast<int>(max_index) + 1;
    Matrix a(n, n);
    for (const auto& e : edges) {
        a(e.i, e.j) += e.w;
        if (undirected && e.i != e.j) a(e.j, e.i) += e.w;
    }
    return AffinityMatrix(std::move(a));
}

AffinityMatrix parse_edge_list_file(const std::string& path, bool undirected) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);
    return parse_edge_list(in, undirected);
}

std::string format_double(double x) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        double back = 0.0;
        std::from_chars(buf, buf + std::strlen(buf), back);
        if (back == x) break;
    }
    return buf;
}

void write_matrix(std::ostream& out, const Matrix& m, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << "\n";
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) out << ",";
            out << format_double(m(i, j));
        }
        out << "\n";
    }
}

void write_matrix_file(const std::string& path, const Matrix& m,
                       const std::vector<std::string>& comments) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    write_matrix(out, m, comments);
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace) {
    out << "iteration,one_step_diff,two_step_diff\n";
    for (const auto& e : trace) {
        out << e.iteration << "," << format_double(e.one_step_diff) << ","
            << (std::isnan(e.two_step_diff) ? std::string("nan")
                                            : format_double(e.two_step_diff))
            << "\n";
    }
}

void write_summary(std::ostream& out, const SummaryItems& items) {
    for (const auto& [key, value] : items) out << key << ": " << value << "\n";
}

namespace {

std::string join_class(const std::vector<int>& members, int offset) {
    std::string s = "{";
    for (size_t i = 0; i < members.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(members[i] + offset);
    }
    return s + "}";
}

std::string join_classes(const std::vector<std::vector<int>>& classes, int offset) {
    std::string s;
    for (size_t i = 0; i < classes.size(); ++i) {
        if (i) s += " | ";
        s += join_class(classes[i], offset);
    }
    return s;
}

}  // namespace

SummaryItems analysis_summary(const ChainClassification& c, const StationaryResult* pi,
                              const SpectrumSummary* spectrum) {
    SummaryItems items;
    items.emplace_back("classes", join_classes(c.classes, 0));
    items.emplace_back("classes_1based", join_classes(c.classes, 1));
    items.emplace_back("irreducible", c.irreducible ? "true" : "false");
    items.emplace_back("period", c.period ? std::to_string(*c.period) : "n/a");
    items.emplace_back("regular", c.regular ? "true" : "false");
    items.emplace_back("regularity_index",
                       c.regularity_index ? std::to_string(*c.regularity_index) : "n/a");
    if (pi) {
        std::string s;
        for (size_t j = 0; j < pi->pi.size(); ++j) {
            if (j) s += ",";
            s += format_double(pi->pi[j]);
        }
        items.emplace_back("pi", s);
        items.emplace_back("residual", format_double(pi->residual));
        items.emplace_back("stationary_method", pi->method == StationaryMethod::linear_solve
                                                    ? "linear-solve"
                                                    : "power-iteration");
    } else {
        items.emplace_back("pi", "n/a");
        items.emplace_back("residual", "n/a");
        items.emplace_back("stationary_method", "n/a");
    }
    items.emplace_back("subdominant_modulus",
                       spectrum ? format_double(spectrum->subdominant_modulus) : "n/a");
    if (spectrum) items.emplace_back("spectral_gap", format_double(spectrum->gap));
    return items;
}

void write_empirical_law(std::ostream& out, const EmpiricalLaw& law,
                         const std::string& mechanism) {
    out << "# mechanism=" << mechanism << " generation=" << law.generation
        << " replicates=" << law.replicates << " seed=" << law.seed << "\n";
    out << "# rows: root type; columns: descendant type; entries: frequency\n";
    write_matrix(out, law.frequencies());
}

}  // namespace gwdiff::io
