#pragma once

// CSV emission for experiment results. Rows are sorted by sweep value, then
// algorithm, then trial id; numbers use "%.9g" so reruns are byte-identical.

#include <string>
#include <vector>

#include "vlp/harness.hpp"

namespace vlp {

std::string format_number(double v);

/// fov_deg,algorithm,dimension,cr
std::string coverage_csv(const std::vector<CoverageResult>& results);

/// algorithm,dimension,dpc_cm,percentile,pe_m with percentiles 5, 10, ..., 100.
std::string percentile_csv(const std::vector<TrialSeries>& series);

/// trial,algorithm,pe_m,elapsed_s for the series at one d_pc. Elapsed times are
/// written as NA unless `record_elapsed`, since wall-clock time is not reproducible.
std::string trials_csv(const std::vector<TrialSeries>& series, double dpc_cm, bool record_elapsed = false);

/// sigma_px,algorithm,dpc_cm,mean_pe_m,large_pe_ratio
std::string noise_csv(const std::vector<TrialSeries>& series, double large_pe_threshold_m = 1.0);

/// algorithm,dimension,median_s,mean_s,p95_s
std::string timing_csv(const std::vector<TimingResult>& results);

/// Throws IoError.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace vlp
