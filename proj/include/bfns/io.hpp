#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bfns/attractor.hpp"
#include "bfns/energy.hpp"
#include "bfns/integrate.hpp"
#include "bfns/kneser.hpp"
#include "bfns/stability.hpp"

namespace bfns {

inline constexpr std::uint32_t kTrajectoryVersion = 1;
inline constexpr std::size_t kTrajectoryHeaderBytes = 53;

/// Size in bytes of a trajectory file with `count` snapshots.
std::size_t trajectory_file_size(int dim, int modes, std::size_t count);

/// Little-endian "BFNS" file: header (version, d, K, beta, mu, alpha, N)
/// followed by t and the full coefficient cube of every snapshot.
std::vector<std::uint8_t> encode_trajectory(const Trajectory& traj);
void write_trajectory(const Trajectory& traj, const std::string& path);

/// Inverse of encode_trajectory. The returned config has tau and t_end from
/// the first and last snapshot, dt from the spacing of the first two (t_end
/// - tau when fewer) and stride 1; forcing is not stored. Diagnostics are
/// empty.
Trajectory decode_trajectory(const std::vector<std::uint8_t>& bytes, const std::string& origin = "<memory>");
Trajectory read_trajectory(const std::string& path);

/// 17 significant digits, general notation; parse_double inverts it exactly.
std::string format_double(double x);
double parse_double(std::string_view s);

struct CsvTable {
    std::vector<std::string> comments;  // written as "# ..." lines before the header
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    /// Column index by name; throws FormatError when absent.
    std::size_t column(std::string_view name) const;
};

std::string to_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);
void write_csv(const CsvTable& table, const std::string& path);
CsvTable read_csv(const std::string& path);

void write_text(const std::string& text, const std::string& path);
std::string read_text(const std::string& path);

CsvTable ledger_table(const EnergyLedger& ledger);
CsvTable stability_table(const StabilityReport& report);
CsvTable kneser_table(const KneserResult& result);
CsvTable distance_table(const DistanceSeries& series);
CsvTable regularity_table(const std::vector<RegularityRow>& rows);

}  // namespace bfns
