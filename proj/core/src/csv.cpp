#include "uhdreg/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace uhdreg {

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

std::string design_to_csv(const DesignMatrix& design) {
  std::ostringstream out;
  out << "# n=" << design.n() << ",p=" << design.p()
      << ",normalized=" << (design.normalized ? 1 : 0) << "\n";
  for (int i = 0; i < design.n(); ++i) {
    for (int j = 0; j < design.p(); ++j) {
      if (j) out << ",";
      out << format_double(design.entries(i, j));
    }
    out << "\n";
  }
  return out.str();
}

DesignMatrix design_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# n=", 0) != 0) {
    throw std::invalid_argument("design CSV: missing `# n=..,p=..,normalized=..` header");
  }
  int n = 0, p = 0, normalized = 0;
  if (std::sscanf(line.c_str(), "# n=%d,p=%d,normalized=%d", &n, &p, &normalized) != 3) {
    throw std::invalid_argument("design CSV: malformed header: " + line);
  }
  if (n < 1 || p < 1) throw std::invalid_argument("design CSV: bad dimensions");

  DesignMatrix d;
  d.entries.resize(n, p);
  d.normalized = normalized != 0;
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw std::invalid_argument("design CSV: expected " + std::to_string(n) + " rows");
    }
    std::istringstream row(line);
    std::string cell;
    for (int j = 0; j < p; ++j) {
      if (!std::getline(row, cell, ',')) {
        throw std::invalid_argument("design CSV: row " + std::to_string(i + 1) +
                                    " has fewer than p entries");
      }
      d.entries(i, j) = std::strtod(cell.c_str(), nullptr);
    }
  }
  return d;
}

void write_design_csv(const DesignMatrix& design, const std::string& path) {
  write_text_file(path, design_to_csv(design));
}

DesignMatrix read_design_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open design CSV: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return design_from_csv(buffer.str());
}

std::string tail_bound_csv_header() {
  return "bound,params,x,threshold,empirical_exceedance,replicates,verdict";
}

std::string tail_bound_csv_row(const TailBoundReport& report) {
  std::ostringstream out;
  out << tail_bound_name(report.bound_name) << ",";
  bool first = true;
  for (const auto& [key, value] : report.parameters) {
    if (!first) out << ";";
    out << key << "=" << format_double(value);
    first = false;
  }
  out << "," << format_double(report.x) << "," << format_double(report.threshold) << ",";
  if (report.empirical_exceedance) out << format_double(*report.empirical_exceedance);
  out << ",";
  if (report.replicates) out << *report.replicates;
  out << "," << (report.informational ? "INFO" : (report.pass ? "PASS" : "FAIL"));
  return out.str();
}

std::string test_report_to_csv(const TestReport& report) {
  std::ostringstream out;
  out << "k,statistic,threshold,margin\n";
  for (const auto& row : report.statistics) {
    out << row.k << "," << format_double(row.statistic) << ","
        << format_double(row.threshold) << ","
        << format_double(row.statistic - row.threshold) << "\n";
  }
  out << "# " << procedure_name(report.procedure) << " alpha=" << format_double(report.alpha)
      << " kstar=" << report.kstar << " verdict=" << (report.reject ? "reject" : "accept");
  if (report.winning_k) out << " winning_k=" << *report.winning_k;
  if (report.winning_support && !report.winning_support->empty()) {
    out << " winning_support=";
    for (std::size_t i = 0; i < report.winning_support->size(); ++i) {
      if (i) out << ";";
      out << (*report.winning_support)[i];
    }
  }
  out << "\n";
  return out.str();
}

std::string selection_csv_header() { return "selector,selected_k,support,rss,criterion"; }

std::string selection_csv_row(const SelectionResult& result) {
  std::ostringstream out;
  switch (result.selector) {
    case Selector::V: out << "V"; break;
    case Selector::BM: out << "BM"; break;
    case Selector::FixedK: out << "FixedK"; break;
    case Selector::FullLS: out << "FullLS"; break;
  }
  out << "," << result.selected_k << ",";
  for (std::size_t i = 0; i < result.support.size(); ++i) {
    if (i) out << ";";
    out << result.support[i];
  }
  out << "," << format_double(result.rss) << "," << format_double(result.criterion);
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
  if (!out) throw std::runtime_error("failed writing file: " + path);
}

}  // namespace uhdreg
