#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cfmgm/harness.hpp"

namespace cfmgm {

/// 17 significant digits; round-trips any double exactly.
std::string format_double(double value);

void write_raw_csv(std::ostream& out, const std::vector<RawRecord>& records);
void write_raw_csv_file(const std::string& path,
                        const std::vector<RawRecord>& records);
std::vector<RawRecord> read_raw_csv_file(const std::string& path);

void write_aggregate_csv(std::ostream& out,
                         const std::vector<AggregatePoint>& points);
void write_aggregate_csv_file(const std::string& path,
                              const std::vector<AggregatePoint>& points);
std::vector<AggregatePoint> read_aggregate_csv_file(const std::string& path);

void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows);
void write_timing_csv_file(const std::string& path,
                           const std::vector<TimingRow>& rows);

}  // namespace cfmgm
