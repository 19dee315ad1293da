#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ksosbo/bo.hpp"
#include "ksosbo/metrics.hpp"

namespace ksosbo {

/// 17 significant digits, so parsing gives back the same double.
std::string format_double(double v);
double parse_double(const std::string& s, const std::string& context);

inline constexpr const char* kNa = "NA";

extern const std::vector<std::string> kRunColumns;
extern const std::vector<std::string> kSummaryColumns;

std::string run_csv_name(const std::string& benchmark, int dim, const std::string& optimizer);
std::string diagnostics_csv_name(const std::string& benchmark, int dim, const std::string& optimizer);

/// All runs of one (benchmark, optimizer) pair, ordered as given.
void write_run_csv(const std::filesystem::path& path, const std::vector<const RunRecord*>& runs);
/// Splits rows back into records by seed, in order of first appearance.
std::vector<RunRecord> read_run_csv(const std::filesystem::path& path);

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<const RunRecord*>& runs);
void write_failures_csv(const std::filesystem::path& path, const std::vector<const RunRecord*>& failed);

void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

/// Splits one CSV line on commas, honoring double quotes.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace ksosbo
