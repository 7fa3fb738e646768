#include "ptdyn/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

namespace ptdyn {

namespace {

constexpr char kMagic[7] = {'P', 'T', 'P', 'R', 'O', 'P', '1'};

void write_raw(std::ofstream& out, const void* data, std::size_t bytes) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
}

void read_raw(std::ifstream& in, void* data, std::size_t bytes) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(bytes));
  if (!in) throw std::runtime_error("load_trajectory: truncated file");
}

void write_matrix(std::ofstream& out, const Matrix& m) {
  write_raw(out, m.data(), sizeof(Complex) * m.size());
}

void read_matrix(std::ifstream& in, Matrix& m) {
  read_raw(in, m.data(), sizeof(Complex) * m.size());
}

}  // namespace

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_trajectory: cannot open " + path.string());
  write_raw(out, kMagic, sizeof(kMagic));
  const std::uint8_t scheme = static_cast<std::uint8_t>(traj.scheme);
  write_raw(out, &scheme, 1);
  const std::uint32_t n_g = static_cast<std::uint32_t>(traj.n_grid);
  const std::uint32_t n = static_cast<std::uint32_t>(traj.rank);
  write_raw(out, &n_g, 4);
  write_raw(out, &n, 4);
  const std::uint64_t count = traj.samples.size();
  write_raw(out, &count, 8);
  const double h = traj.step_size;
  write_raw(out, &h, 8);
  const std::uint32_t occ_size = static_cast<std::uint32_t>(traj.initial_occupation.size());
  write_raw(out, &occ_size, 4);
  write_raw(out, traj.initial_occupation.data(), 8 * occ_size);
  for (const StateSample& s : traj.samples) {
    write_raw(out, &s.t, 8);
    if (traj.scheme == Scheme::RK4Dense) {
      write_matrix(out, s.density);
    } else {
      write_matrix(out, s.orbitals);
      write_matrix(out, s.occupation);
    }
  }
  if (!out) throw std::runtime_error("save_trajectory: write failed for " + path.string());
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_trajectory: cannot open " + path.string());
  char magic[7];
  read_raw(in, magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("load_trajectory: bad magic in " + path.string());
  std::uint8_t scheme_byte;
  read_raw(in, &scheme_byte, 1);
  if (scheme_byte > 2)
    throw std::runtime_error("load_trajectory: unknown scheme byte");
  std::uint32_t n_g, n;
  read_raw(in, &n_g, 4);
  read_raw(in, &n, 4);
  std::uint64_t count;
  read_raw(in, &count, 8);

  Trajectory traj;
  traj.scheme = static_cast<Scheme>(scheme_byte);
  traj.n_grid = static_cast<int>(n_g);
  traj.rank = static_cast<int>(n);
  read_raw(in, &traj.step_size, 8);
  std::uint32_t occ_size;
  read_raw(in, &occ_size, 4);
  traj.initial_occupation.resize(occ_size);
  read_raw(in, traj.initial_occupation.data(), 8 * occ_size);
  traj.samples.resize(count);
  for (StateSample& s : traj.samples) {
    read_raw(in, &s.t, 8);
    if (traj.scheme == Scheme::RK4Dense) {
      s.density.resize(n_g, n_g);
      read_matrix(in, s.density);
    } else {
      s.orbitals.resize(n_g, n);
      s.occupation.resize(n, n);
      read_matrix(in, s.orbitals);
      read_matrix(in, s.occupation);
    }
  }
  return traj;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows,
               const std::vector<std::string>& comment_lines) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
  for (const auto& c : comment_lines) out << "# " << c << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "");
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (std::isnan(row[i]))
        out << (i + 1 < row.size() ? "," : "");
      else
        out << format_full(row[i]) << (i + 1 < row.size() ? "," : "");
    }
    out << "\n";
  }
}

namespace {

struct AxisMap {
  double lo = 0.0, hi = 1.0, pix0 = 0.0, pix1 = 1.0;
  double operator()(double v) const {
    if (hi == lo) return 0.5 * (pix0 + pix1);
    return pix0 + (v - lo) / (hi - lo) * (pix1 - pix0);
  }
};

double log_safe(double v) {
  return std::log10(std::max(v, 1e-300));
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::vector<SvgSeries>& series, bool log_x, bool log_y) {
  const int width = 720, height = 480, margin = 60;
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = log_x ? log_safe(s.x[i]) : s.x[i];
      const double y = log_y ? log_safe(s.y[i]) : s.y[i];
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  if (!(xlo <= xhi)) { xlo = 0; xhi = 1; }
  if (!(ylo <= yhi)) { ylo = 0; yhi = 1; }
  if (xhi == xlo) { xhi += 0.5; xlo -= 0.5; }
  if (yhi == ylo) { yhi += 0.5; ylo -= 0.5; }
  const AxisMap xm{xlo, xhi, static_cast<double>(margin),
                   static_cast<double>(width - margin)};
  const AxisMap ym{ylo, yhi, static_cast<double>(height - margin),
                   static_cast<double>(margin)};

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("write_svg_plot: cannot open " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
  // axes
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
      << width - margin << "\" y2=\"" << height - margin
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xlo + (xhi - xlo) * i / 4.0;
    const double fy = ylo + (yhi - ylo) * i / 4.0;
    char bx[32], by[32];
    std::snprintf(bx, sizeof(bx), log_x ? "1e%.3g" : "%.4g", fx);
    std::snprintf(by, sizeof(by), log_y ? "1e%.3g" : "%.4g", fy);
    out << "<text x=\"" << xm(fx) << "\" y=\"" << height - margin + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << bx << "</text>\n";
    out << "<text x=\"" << margin - 6 << "\" y=\"" << ym(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << by << "</text>\n";
  }
  int legend_y = margin;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = log_x ? log_safe(s.x[i]) : s.x[i];
      const double y = log_y ? log_safe(s.y[i]) : s.y[i];
      out << xm(x) << "," << ym(y) << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << width - margin - 150 << "\" y=\"" << legend_y
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << s.color
        << "\">" << s.label << "</text>\n";
    legend_y += 16;
  }
  out << "</svg>\n";
}

}  // namespace ptdyn
