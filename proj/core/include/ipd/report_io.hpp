#pragma once

#include <string>
#include <vector>

#include "ipd/bcdr.hpp"
#include "ipd/tournament.hpp"

namespace ipd {

/// Canonical decimal rendering, 9 significant digits (printf %.9g). Every
/// number in the CSV outputs goes through this.
std::string format9(double v);

/// The double nearest to format9(v); applied to JSON values so the emitted
/// text never carries more than 9 significant digits.
double round9(double v);

/// The measure column labels of matrices.csv, in emission order:
/// individual, collective, relative, cooperation.
const std::vector<std::string>& measure_names();

/// Long-format measures file. Pairwise/mental reports walk the four square
/// matrices (measure-major, then row-major); triple reports emit one block
/// of four rows per seat of each match, with col_agent joining the other
/// seats with '+'.
void write_matrices_csv(const std::string& path, const TournamentReport& report);

/// Full per-round series: match,run,round,seat,action,reward,reward_norm
/// (all indices 0-based), in fixed match-index order.
void write_series_csv(const std::string& path, const TournamentReport& report);

/// Cooperation curves of a demonstration evaluation:
/// round,agent_rate,teacher_rate with round 1-based to match the trajectory
/// schema.
void write_bcdr_curves_csv(const std::string& path, const BcdrReport& report);

/// Plot-ready extracts under `dir`: heatmap_<measure>.csv per matrix measure
/// (pairwise/mental only) and timeseries_match_<index>.csv per match with
/// the per-round mean reward and cooperation rate of every seat.
void write_plot_data(const std::string& dir, const TournamentReport& report);

}  // namespace ipd
