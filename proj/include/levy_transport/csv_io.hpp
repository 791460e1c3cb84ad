#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "levy_transport/decay_analysis.hpp"
#include "levy_transport/grid.hpp"
#include "levy_transport/levy_measure.hpp"
#include "levy_transport/nonlocal_operator.hpp"
#include "levy_transport/transport_sim.hpp"

namespace levy_transport {

// Ordered key/value header written as "# key = value" lines ahead of the CSV
// body. Holds everything needed to re-run the producing command; no
// timestamps, so identical runs produce identical bytes.
class Metadata {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long value);
  void set(const std::string& key, std::uint64_t value);
  const std::string* find(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string format_double(double v);  // shortest round-trip-exact form

void write_metadata(std::ostream& out, const Metadata& meta);
Metadata read_metadata(std::istream& in);  // consumes leading '#' lines

// Snapshot schema: columns t,x,value,stderr ordered by (t, x).
void write_snapshots_csv(const std::string& path, const Metadata& meta,
                         const std::vector<double>& xs, const std::vector<MeanField>& fields);

struct SnapshotsData {
  Metadata meta;
  std::vector<double> xs;
  std::vector<MeanField> fields;
};
SnapshotsData read_snapshots_csv(const std::string& path);

// Decay series schema: columns t,value,stderr.
void write_series_csv(const std::string& path, const Metadata& meta,
                      const std::vector<DecayPoint>& series);
std::vector<DecayPoint> read_series_csv(const std::string& path, Metadata* meta = nullptr);

void write_weight_table_csv(const std::string& path, const WeightTable& table);
WeightTable read_weight_table_csv(const std::string& path);

void write_comparison_csv(const std::string& path, const Metadata& meta,
                          const ComparisonReport& report);

void write_conservation_csv(const std::string& path, const Metadata& meta,
                            const std::vector<ConservationRow>& rows);

void write_fit_report_csv(const std::string& path, const Metadata& meta, const DecayFit& fit);
std::string fit_summary_text(const DecayFit& fit, const LogLogTable& table);

void write_loglog_csv(const std::string& path, const Metadata& meta, const LogLogTable& table);

// gnuplot script rendering the decay and log-log figures from the CSVs.
void write_gnuplot_script(const std::string& path, const std::string& series_csv,
                          const DecayFit& fit);

}  // namespace levy_transport
