#include "romvel/rom.hpp"

#include <sstream>

#include <Eigen/Dense>

#include "detail/binary_io.hpp"
#include "romvel/error.hpp"

namespace romvel {

namespace {

Eigen::MatrixXd assemble_blocks(const std::vector<Eigen::MatrixXd>& samples, int m, int n,
                                double sign) {
  const Eigen::Index nm = static_cast<Eigen::Index>(n) * m;
  Eigen::MatrixXd out(nm, nm);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto& a = samples[static_cast<std::size_t>(i + j)];
      const auto& b = samples[static_cast<std::size_t>(i > j ? i - j : j - i)];
      out.block(i * m, j * m, m, m) = sign * 0.5 * (a + b);
    }
  }
  return out;
}

Eigen::MatrixXd factor(const Eigen::MatrixXd& mass, int m) {
  const Eigen::Index nm = mass.rows();
  const int n = static_cast<int>(nm / m);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(nm, nm);
  for (int k = 0; k < n; ++k) {
    const Eigen::Index row = static_cast<Eigen::Index>(k) * m;
    // Schur complement of the leading k blocks.
    Eigen::MatrixXd schur = mass.block(row, row, m, m);
    if (k > 0) schur.noalias() -= r.block(0, row, row, m).transpose() * r.block(0, row, row, m);
    schur = 0.5 * (schur + schur.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> llt(schur);
    bool ok = llt.info() == Eigen::Success;
    Eigen::MatrixXd diag;
    if (ok) {
      diag = llt.matrixU();
      ok = (diag.diagonal().array() > 0.0).all() && diag.allFinite();
    }
    if (!ok) {
      std::ostringstream os;
      os << "mass matrix is not positive definite at block " << k;
      throw MassNotSPD(k, os.str());
    }
    r.block(row, row, m, m) = diag;
    const Eigen::Index rest = nm - row - m;
    if (rest == 0) continue;
    Eigen::MatrixXd rhs = mass.block(row, row + m, m, rest);
    if (k > 0) rhs.noalias() -= r.block(0, row, row, m).transpose() * r.block(0, row + m, row, rest);
    r.block(row, row + m, m, rest) =
        diag.triangularView<Eigen::Upper>().transpose().solve(rhs);
  }
  return r;
}

}  // namespace

Eigen::MatrixXd assemble_mass(const DataSet& data) {
  data.validate();
  return assemble_blocks(data.d, data.m, data.n, 1.0);
}

Eigen::MatrixXd assemble_stiffness(const DataSet& data) {
  data.validate();
  return assemble_blocks(data.ddot, data.m, data.n, -1.0);
}

Eigen::MatrixXd block_cholesky(const Eigen::MatrixXd& mass, int m, const CholeskyOptions& opts) {
  if (m < 1 || mass.rows() != mass.cols() || mass.rows() % m != 0)
    throw ConfigError("mass matrix must be square with a dimension divisible by the block size");
  try {
    return factor(mass, m);
  } catch (const MassNotSPD&) {
    if (!opts.jitter) throw;
  }
  const double eps = 1e-12 * mass.norm();
  Eigen::MatrixXd shifted = mass;
  shifted.diagonal().array() += eps;
  return factor(shifted, m);
}

OperatorRom build_rom(const DataSet& data, const CholeskyOptions& opts) {
  const Eigen::MatrixXd mass = assemble_mass(data);
  const Eigen::MatrixXd stiff = assemble_stiffness(data);
  OperatorRom rom;
  rom.m = data.m;
  rom.n = data.n;
  rom.r = block_cholesky(mass, data.m, opts);
  const Eigen::MatrixXd rt = rom.r.transpose();
  const auto lower = rt.triangularView<Eigen::Lower>();
  // X = R^{-T} S, then A = X R^{-1} = (R^{-T} X^T)^T.
  const Eigen::MatrixXd x = lower.solve(stiff);
  const Eigen::MatrixXd a = lower.solve(x.transpose()).transpose();
  rom.a_rom = 0.5 * (a + a.transpose());
  return rom;
}

Eigen::MatrixXd restrict_rom(const OperatorRom& rom, int k) {
  if (k < 1 || k > rom.n) {
    std::ostringstream os;
    os << "restriction size k = " << k << " outside [1, " << rom.n << "]";
    throw IndexOutOfRange(os.str());
  }
  const Eigen::Index km = static_cast<Eigen::Index>(k) * rom.m;
  return rom.a_rom.topLeftCorner(km, km);
}

Eigen::Index rest_dk_length(int m, int k, int d) {
  const Eigen::Index dm = static_cast<Eigen::Index>(d) * m;
  const Eigen::Index km = static_cast<Eigen::Index>(k) * m;
  return dm * km - dm * (dm - 1) / 2;
}

Eigen::VectorXd rest_dk(const Eigen::MatrixXd& x, int m, int d) {
  if (m < 1 || x.rows() != x.cols() || x.rows() % m != 0)
    throw ConfigError("rest_dk needs a square matrix with dimension divisible by m");
  const int k = static_cast<int>(x.rows() / m);
  if (d < 1 || d > k) {
    std::ostringstream os;
    os << "band depth d = " << d << " outside [1, " << k << "]";
    throw BandExceedsMatrix(os.str());
  }
  const Eigen::Index km = x.rows();
  const Eigen::Index dm = static_cast<Eigen::Index>(d) * m;
  Eigen::VectorXd out(rest_dk_length(m, k, d));
  Eigen::Index pos = 0;
  for (Eigen::Index i = 0; i < km; ++i) {
    const Eigen::Index last = std::min(i + dm - 1, km - 1);
    for (Eigen::Index j = i; j <= last; ++j) out[pos++] = x(i, j);
  }
  return out;
}

Eigen::VectorXd triu_vec(const Eigen::MatrixXd& x) {
  if (x.rows() != x.cols()) throw ConfigError("triu_vec needs a square matrix");
  if (x.rows() == 0) return {};
  return rest_dk(x, static_cast<int>(x.rows()), 1);
}

double mass_condition_number(const Eigen::MatrixXd& mass) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mass, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

void write_rom(const OperatorRom& rom, const std::filesystem::path& stem) {
  const Eigen::Index nm = static_cast<Eigen::Index>(rom.m) * rom.n;
  if (rom.a_rom.rows() != nm || rom.r.rows() != nm) throw ConfigError("ROM shape mismatch");
  nlohmann::json header = {{"format", "romvel.rom/1"},
                           {"m", rom.m},
                           {"n", rom.n},
                           {"layout", "A_rom then R, (nm x nm) float64 LE column-major"}};
  detail::write_json(detail::with_ext(stem, ".json"), header);
  std::ofstream os = detail::open_out(detail::with_ext(stem, ".bin"), true);
  const std::size_t count = static_cast<std::size_t>(nm * nm);
  detail::write_f64(os, rom.a_rom.data(), count);
  detail::write_f64(os, rom.r.data(), count);
  if (!os) throw IoError("failed writing ROM payload");
}

OperatorRom read_rom(const std::filesystem::path& stem) {
  const nlohmann::json header = detail::read_json(detail::with_ext(stem, ".json"));
  OperatorRom rom;
  try {
    rom.m = header.at("m").get<int>();
    rom.n = header.at("n").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("ROM header: ") + e.what());
  }
  if (rom.m < 1 || rom.n < 1) throw IoError("ROM header has invalid sizes");
  const Eigen::Index nm = static_cast<Eigen::Index>(rom.m) * rom.n;
  std::ifstream is = detail::open_in(detail::with_ext(stem, ".bin"), true);
  rom.a_rom.resize(nm, nm);
  rom.r.resize(nm, nm);
  const std::size_t count = static_cast<std::size_t>(nm * nm);
  detail::read_f64(is, rom.a_rom.data(), count);
  detail::read_f64(is, rom.r.data(), count);
  return rom;
}

}  // namespace romvel
