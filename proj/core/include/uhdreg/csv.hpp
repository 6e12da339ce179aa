#ifndef UHDREG_CSV_HPP
#define UHDREG_CSV_HPP

#include <string>
#include <vector>

#include "uhdreg/design.hpp"
#include "uhdreg/dist.hpp"
#include "uhdreg/estimators.hpp"
#include "uhdreg/hypo.hpp"

namespace uhdreg {

/// Locale-independent formatting used everywhere a number reaches a file,
/// so identical inputs always serialize to identical bytes.
std::string format_double(double v);

/// Design fixture format: one comment line `# n=<n>,p=<p>,normalized=<0|1>`
/// followed by the entries, row-major, one CSV row per observation.
std::string design_to_csv(const DesignMatrix& design);
DesignMatrix design_from_csv(const std::string& text);
void write_design_csv(const DesignMatrix& design, const std::string& path);
DesignMatrix read_design_csv(const std::string& path);

/// One row per tail-bound check:
/// bound,params,x,threshold,empirical_exceedance,replicates,verdict
std::string tail_bound_csv_header();
std::string tail_bound_csv_row(const TailBoundReport& report);

/// Per-k statistic rows (k,statistic,threshold,margin) plus a verdict line.
std::string test_report_to_csv(const TestReport& report);

/// selector,selected_k,support,rss,criterion
std::string selection_csv_header();
std::string selection_csv_row(const SelectionResult& result);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace uhdreg

#endif
