#include "vlp/results_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <tuple>

#include "vlp/error.hpp"

namespace vlp {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

std::string dim_name(Dimension d) { return std::string(to_string(d)); }

std::vector<const TrialSeries*> sorted(const std::vector<TrialSeries>& series) {
    std::vector<const TrialSeries*> out;
    for (const auto& s : series) out.push_back(&s);
    std::stable_sort(out.begin(), out.end(), [](const TrialSeries* a, const TrialSeries* b) {
        return std::tie(a->sigma_px, a->dpc_cm, a->algorithm) < std::tie(b->sigma_px, b->dpc_cm, b->algorithm);
    });
    return out;
}

}  // namespace

std::string coverage_csv(const std::vector<CoverageResult>& results) {
    std::vector<const CoverageResult*> rows;
    for (const auto& r : results) rows.push_back(&r);
    std::stable_sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->fov_deg < b->fov_deg; });
    std::string out = "fov_deg,algorithm,dimension,cr\n";
    for (const auto* r : rows) {
        auto entries = r->entries;
        std::sort(entries.begin(), entries.end(), [](auto& a, auto& b) { return a.algorithm < b.algorithm; });
        for (const auto& e : entries) {
            out += format_number(r->fov_deg) + "," + e.algorithm + "," + dim_name(r->dimension) + "," +
                   format_number(e.cr) + "\n";
        }
    }
    return out;
}

std::string percentile_csv(const std::vector<TrialSeries>& series) {
    std::string out = "algorithm,dimension,dpc_cm,percentile,pe_m\n";
    for (const auto* s : sorted(series)) {
        const auto errors = s->errors();
        for (int p = 5; p <= 100; p += 5) {
            out += s->algorithm + "," + dim_name(s->dimension) + "," + format_number(s->dpc_cm) + "," +
                   std::to_string(p) + "," + format_number(nearest_rank_percentile(errors, p)) + "\n";
        }
    }
    return out;
}

std::string trials_csv(const std::vector<TrialSeries>& series, double dpc_cm, bool record_elapsed) {
    struct Row {
        int trial;
        const TrialRecord* rec;
    };
    std::vector<Row> rows;
    for (const auto* s : sorted(series)) {
        if (s->dpc_cm != dpc_cm) continue;
        for (const auto& t : s->trials) rows.push_back({t.trial, &t});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.trial, a.rec->algorithm) < std::tie(b.trial, b.rec->algorithm);
    });
    std::string out = "trial,algorithm,pe_m,elapsed_s\n";
    for (const auto& r : rows) {
        out += std::to_string(r.trial) + "," + r.rec->algorithm + "," + format_number(r.rec->pe_m) + "," +
               (record_elapsed ? format_number(r.rec->elapsed_s) : std::string("NA")) + "\n";
    }
    return out;
}

std::string noise_csv(const std::vector<TrialSeries>& series, double large_pe_threshold_m) {
    std::string out = "sigma_px,algorithm,dpc_cm,mean_pe_m,large_pe_ratio\n";
    for (const auto* s : sorted(series)) {
        out += format_number(s->sigma_px) + "," + s->algorithm + "," + format_number(s->dpc_cm) + "," +
               format_number(s->mean_pe()) + "," + format_number(s->large_pe_ratio(large_pe_threshold_m)) + "\n";
    }
    return out;
}

std::string timing_csv(const std::vector<TimingResult>& results) {
    auto rows = results;
    std::stable_sort(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.algorithm < b.algorithm; });
    std::string out = "algorithm,dimension,median_s,mean_s,p95_s\n";
    for (const auto& r : rows) {
        out += r.algorithm + "," + dim_name(r.dimension) + "," + format_number(r.median_s) + "," +
               format_number(r.mean_s) + "," + format_number(r.p95_s) + "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoError, "cannot open for writing: " + path);
    f << content;
    f.flush();
    if (!f) throw Error(ErrorCode::IoError, "write failed: " + path);
}

}  // namespace vlp
