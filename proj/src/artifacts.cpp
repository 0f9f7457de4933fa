#include "qspin/artifacts.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qspin/error.hpp"

namespace qspin::artifacts {

namespace fs = std::filesystem;

std::string trajectory_file(DynamicsKind kind) {
  return "trajectory_" + std::string(to_string(kind)) + ".csv";
}

std::string observables_file(DynamicsKind kind) {
  return "observables_" + std::string(to_string(kind)) + ".csv";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move " + tmp.string() + " into place: " + ec.message());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string observables_csv(const ObservableTable& table) {
  std::string out = "t";
  for (auto name : kObservableColumns) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    out += format_double(table.times[i]);
    for (const auto& col : table.columns) {
      out += ',';
      out += format_double(col[i]);
    }
    out += '\n';
  }
  return out;
}

std::string trajectory_csv(const Trajectory& traj) {
  const Eigen::Index d = traj.states.empty() ? 0 : traj.states.front().dim();
  std::string out = "t";
  for (const char* prefix : {"rho", "drho"}) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        const std::string base =
            std::string(prefix) + "_" + std::to_string(i) + "_" + std::to_string(j);
        out += "," + base + "_re," + base + "_im";
      }
    }
  }
  out += '\n';
  auto append = [&out, d](const ComplexMatrix& m) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        out += ',';
        out += format_double(m(i, j).real());
        out += ',';
        out += format_double(m(i, j).imag());
      }
    }
  };
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out += format_double(traj.times[k]);
    append(traj.states[k].matrix());
    append(traj.derivatives[k]);
    out += '\n';
  }
  return out;
}

PersistedTrajectory parse_trajectory_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    if (end > pos) lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  if (lines.size() < 2) throw Error("trajectory CSV has no data rows");

  const std::size_t columns =
      static_cast<std::size_t>(std::count(lines[0].begin(), lines[0].end(), ',')) + 1;
  // 1 + 4 d^2 columns
  const auto d = static_cast<Eigen::Index>(std::lround(std::sqrt((columns - 1) / 4.0)));
  if (d < 2 || columns != 1 + 4 * static_cast<std::size_t>(d * d) ||
      lines[0].substr(0, 2) != "t,") {
    throw Error("trajectory CSV header does not match the t, rho, drho layout");
  }

  PersistedTrajectory out;
  std::vector<double> row(columns);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string line(lines[r]);
    const char* p = line.c_str();
    for (std::size_t c = 0; c < columns; ++c) {
      char* end = nullptr;
      errno = 0;
      row[c] = std::strtod(p, &end);
      if (end == p || errno == ERANGE) {
        throw Error("trajectory CSV row " + std::to_string(r) + " column " +
                    std::to_string(c) + " is not a number");
      }
      p = end;
      if (c + 1 < columns) {
        if (*p != ',') throw Error("trajectory CSV row " + std::to_string(r) + " is short");
        ++p;
      }
    }
    if (*p != '\0' && *p != '\r') {
      throw Error("trajectory CSV row " + std::to_string(r) + " has extra columns");
    }
    out.times.push_back(row[0]);
    ComplexMatrix rho(d, d);
    ComplexMatrix drho(d, d);
    std::size_t c = 1;
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j, c += 2) rho(i, j) = Complex(row[c], row[c + 1]);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j, c += 2) drho(i, j) = Complex(row[c], row[c + 1]);
    out.states.push_back(std::move(rho));
    out.derivatives.push_back(std::move(drho));
  }
  return out;
}

nlohmann::json misfit_json(std::string_view scenario, const CurveMap& curves,
                           kernels::Isa isa) {
  nlohmann::json components = nlohmann::json::object();
  for (auto name : kMisfitComponents) {
    const auto it = curves.find(name);
    if (it == curves.end()) continue;
    const MisfitCurve& c = it->second;
    components[std::string(name)] = {{"zeta", c.zetas},
                                     {"misfit", c.values},
                                     {"argmin_zeta", c.argmin_zeta},
                                     {"min_value", c.min_value},
                                     {"interior", c.interior}};
  }
  return {{"schema_version", 1},
          {"scenario", scenario},
          {"kernel", std::string(kernels::to_string(isa))},
          {"components", components}};
}

nlohmann::json verdict_json(std::string_view scenario, const EquivalenceVerdict& v) {
  nlohmann::json argmins = nlohmann::json::object();
  for (const auto& [name, zeta] : v.per_component_argmins) argmins[name] = zeta;
  return {{"schema_version", 1},
          {"scenario", scenario},
          {"per_component_argmins", argmins},
          {"spread", v.spread},
          {"residual", v.residual},
          {"zeta_tol", v.zeta_tol},
          {"residual_tol", v.residual_tol},
          {"equivalent", v.equivalent}};
}

}  // namespace qspin::artifacts
