#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ptdyn/integrators.hpp"

namespace ptdyn {

/// Binary trajectory checkpoint, bit-exact on reload.
///
/// Layout (little endian): magic "PTPROP1", u8 scheme (0 pt, 1 sd, 2 dense),
/// u32 N_g, u32 N, u64 sample count, then per sample a f64 time followed by
/// the column-major complex matrices as interleaved f64 (re, im) pairs:
/// orbitals (N_g x N) and occupation (N x N), or the dense density
/// (N_g x N_g) for the dense scheme.
void save_trajectory(const Trajectory& traj, const std::filesystem::path& path);
Trajectory load_trajectory(const std::filesystem::path& path);

/// One CSV cell per value at full round-trip precision (17 significant digits).
std::string format_full(double v);

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows,
               const std::vector<std::string>& comment_lines = {});

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal polyline plot; log-scaled axes take log10 of the data.
void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::vector<SvgSeries>& series, bool log_x, bool log_y);

}  // namespace ptdyn
