#include "ipd/report_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "ipd/action.hpp"
#include "ipd/error.hpp"

namespace ipd {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("IoError", "cannot open " + path + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw DataError("IoError", "write to " + path + " failed");
}

/// col_agent of a triple-design row: the labels of every other seat, joined
/// with '+' in seat order.
std::string other_seats(const MatchResult& match, int seat) {
  std::string joined;
  for (int s = 0; s < static_cast<int>(match.seat_labels.size()); ++s) {
    if (s == seat) continue;
    if (!joined.empty()) joined += '+';
    joined += match.seat_labels[s];
  }
  return joined;
}

double seat_measure(const MatchAggregates& agg, int measure, int seat) {
  switch (measure) {
    case 0: return agg.individual[seat];
    case 1: return agg.collective;
    case 2: return agg.relative[seat];
    default: return agg.coop[seat];
  }
}

const std::vector<double>& measure_matrix(const TournamentReport& report, int measure) {
  switch (measure) {
    case 0: return report.individual_matrix;
    case 1: return report.collective_matrix;
    case 2: return report.relative_matrix;
    default: return report.coop_matrix;
  }
}

}  // namespace

std::string format9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double round9(double v) { return std::strtod(format9(v).c_str(), nullptr); }

const std::vector<std::string>& measure_names() {
  static const std::vector<std::string> names = {"individual", "collective", "relative",
                                                 "cooperation"};
  return names;
}

void write_matrices_csv(const std::string& path, const TournamentReport& report) {
  std::ofstream out = open_out(path);
  out << "row_agent,col_agent,measure,value\n";
  if (report.design == TournamentReport::Design::Triple) {
    for (std::size_t m = 0; m < measure_names().size(); ++m) {
      for (const MatchResult& match : report.matches) {
        for (int s = 0; s < static_cast<int>(match.seat_labels.size()); ++s) {
          out << match.seat_labels[s] << ',' << other_seats(match, s) << ','
              << measure_names()[m] << ',' << format9(seat_measure(match.agg, static_cast<int>(m), s))
              << '\n';
        }
      }
    }
  } else {
    const int n = report.n();
    for (std::size_t m = 0; m < measure_names().size(); ++m) {
      const std::vector<double>& matrix = measure_matrix(report, static_cast<int>(m));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          out << report.labels[i] << ',' << report.labels[j] << ',' << measure_names()[m] << ','
              << format9(report.cell(matrix, i, j)) << '\n';
        }
      }
    }
  }
  finish(out, path);
}

void write_series_csv(const std::string& path, const TournamentReport& report) {
  std::ofstream out = open_out(path);
  out << "match,run,round,seat,action,reward,reward_norm\n";
  for (std::size_t m = 0; m < report.matches.size(); ++m) {
    const MatchSeries& series = report.matches[m].series;
    for (int run = 0; run < series.runs; ++run) {
      for (int round = 0; round < series.rounds; ++round) {
        for (int seat = 0; seat < series.players; ++seat) {
          out << m << ',' << run << ',' << round << ',' << seat << ','
              << action_char(series.action(run, round, seat)) << ','
              << format9(series.reward(run, round, seat)) << ','
              << format9(series.reward_norm(run, round, seat)) << '\n';
        }
      }
    }
  }
  finish(out, path);
}

void write_bcdr_curves_csv(const std::string& path, const BcdrReport& report) {
  std::ofstream out = open_out(path);
  out << "round,agent_rate,teacher_rate\n";
  for (int r = 0; r < report.horizon(); ++r) {
    out << (r + 1) << ',' << format9(report.agent_curve[r]) << ','
        << format9(report.teacher_curve[r]) << '\n';
  }
  finish(out, path);
}

void write_plot_data(const std::string& dir, const TournamentReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("IoError", "cannot create " + dir + ": " + ec.message());

  if (report.design != TournamentReport::Design::Triple) {
    const int n = report.n();
    for (std::size_t m = 0; m < measure_names().size(); ++m) {
      const std::string path = dir + "/heatmap_" + measure_names()[m] + ".csv";
      std::ofstream out = open_out(path);
      out << "row_agent,col_agent,value\n";
      const std::vector<double>& matrix = measure_matrix(report, static_cast<int>(m));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          out << report.labels[i] << ',' << report.labels[j] << ','
              << format9(report.cell(matrix, i, j)) << '\n';
        }
      }
      finish(out, path);
    }
  }

  for (std::size_t m = 0; m < report.matches.size(); ++m) {
    const MatchResult& match = report.matches[m];
    const std::string path = dir + "/timeseries_match_" + std::to_string(m) + ".csv";
    std::ofstream out = open_out(path);
    out << "round,seat,label,mean_reward,coop_rate\n";
    const int rounds = match.series.rounds;
    const int players = match.series.players;
    for (int round = 0; round < rounds; ++round) {
      for (int seat = 0; seat < players; ++seat) {
        out << round << ',' << seat << ',' << match.seat_labels[seat] << ','
            << format9(match.agg.round_reward[seat][round]) << ','
            << format9(match.agg.round_coop[seat][round]) << '\n';
      }
    }
    finish(out, path);
  }
}

}  // namespace ipd
