#include "branchmc/noise_field.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace branchmc {

namespace {

constexpr char kMagic[8] = {'B', 'M', 'C', 'N', 'O', 'I', 'S', 'E'};
constexpr std::uint32_t kFormatVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("noise load: truncated stream");
  return v;
}

}  // namespace

void GridSpec::validate() const {
  if (!(x_max > x_min)) throw std::invalid_argument("GridSpec: x_max <= x_min");
  if (!(t_max > 0.0)) throw std::invalid_argument("GridSpec: t_max <= 0");
  if (nx < 1 || nt < 1) throw std::invalid_argument("GridSpec: nx, nt must be >= 1");
  if (!(dx() * dt_cell() > 0.0))
    throw std::invalid_argument("GridSpec: degenerate cell size");
}

NoiseRealization NoiseRealization::build(const GridSpec& spec,
                                         std::uint64_t seed,
                                         BoundaryPolicy policy) {
  spec.validate();
  NoiseRealization out(spec, seed, policy);
  out.cells_.resize(spec.nt * spec.nx);
  RngStream rng(seed, kNoiseFieldStream);
  const double sigma = out.cell_sigma();
  for (double& c : out.cells_) c = sigma * rng.normal();
  return out;
}

NoiseRealization NoiseRealization::zeros(const GridSpec& spec,
                                         BoundaryPolicy policy) {
  spec.validate();
  NoiseRealization out(spec, 0, policy);
  out.cells_.assign(spec.nt * spec.nx, 0.0);
  return out;
}

NoiseRealization NoiseRealization::constant(const GridSpec& spec, double value,
                                            BoundaryPolicy policy) {
  spec.validate();
  NoiseRealization out(spec, 0, policy);
  out.cells_.assign(spec.nt * spec.nx, value);
  return out;
}

double NoiseRealization::cell_sigma() const {
  return 1.0 / std::sqrt(spec_.dx() * spec_.dt_cell());
}

std::optional<std::pair<std::size_t, std::size_t>> NoiseRealization::cell_index(
    double t, double x) const {
  if (!(t >= 0.0) || t > spec_.t_max)
    throw std::domain_error("noise lookup outside [0, t_max]");
  std::size_t row = static_cast<std::size_t>(std::floor(t / spec_.dt_cell()));
  if (row >= spec_.nt) row = spec_.nt - 1;  // t == t_max maps to the last row

  const double u = (x - spec_.x_min) / spec_.dx();
  if (policy_ == BoundaryPolicy::ZeroOutside) {
    if (u < 0.0 || u >= static_cast<double>(spec_.nx)) return std::nullopt;
    return std::make_pair(row, static_cast<std::size_t>(u));
  }
  const double nxd = static_cast<double>(spec_.nx);
  double w = u - nxd * std::floor(u / nxd);
  if (w >= nxd) w = 0.0;  // guard the wrap against rounding at the seam
  return std::make_pair(row, static_cast<std::size_t>(w));
}

double NoiseRealization::at(double t, double x) const {
  const auto idx = cell_index(t, x);
  if (!idx) return 0.0;
  return cell(idx->first, idx->second);
}

double event_noise(const NoiseRealization& noise, NoiseMode mode, double t,
                   double x, RngStream& rng) {
  if (mode == NoiseMode::FixedRealization) return noise.at(t, x);
  // Validate (t, x) exactly as a lattice read would, then draw fresh.
  (void)noise.cell_index(t, x);
  return noise.cell_sigma() * rng.normal();
}

double path_noise_integral(const NoiseRealization& noise,
                           const DiffusionPath& path, double t_origin) {
  const double duration = path.duration();
  if (t_origin < duration || t_origin > noise.spec().t_max)
    throw std::domain_error(
        "path_noise_integral: path exits the realized horizon");
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < path.samples.size(); ++k) {
    const auto& a = path.samples[k];
    const double ds = path.samples[k + 1].s - a.s;
    acc += noise.at(t_origin - a.s, a.x) * ds;
  }
  return acc;
}

void NoiseRealization::dump(std::ostream& os) const {
  os.write(kMagic, sizeof(kMagic));
  put(os, kFormatVersion);
  put(os, static_cast<std::uint32_t>(policy_));
  put(os, seed_);
  put(os, spec_.x_min);
  put(os, spec_.x_max);
  put(os, static_cast<std::uint64_t>(spec_.nx));
  put(os, spec_.t_max);
  put(os, static_cast<std::uint64_t>(spec_.nt));
  os.write(reinterpret_cast<const char*>(cells_.data()),
           static_cast<std::streamsize>(cells_.size() * sizeof(double)));
}

NoiseRealization NoiseRealization::load(std::istream& is) {
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("noise load: bad magic");
  const auto version = get<std::uint32_t>(is);
  if (version != kFormatVersion)
    throw std::runtime_error("noise load: unsupported format version");
  const auto policy = static_cast<BoundaryPolicy>(get<std::uint32_t>(is));
  const auto seed = get<std::uint64_t>(is);
  GridSpec spec;
  spec.x_min = get<double>(is);
  spec.x_max = get<double>(is);
  spec.nx = static_cast<std::size_t>(get<std::uint64_t>(is));
  spec.t_max = get<double>(is);
  spec.nt = static_cast<std::size_t>(get<std::uint64_t>(is));
  spec.validate();
  NoiseRealization out(spec, seed, policy);
  out.cells_.resize(spec.nt * spec.nx);
  is.read(reinterpret_cast<char*>(out.cells_.data()),
          static_cast<std::streamsize>(out.cells_.size() * sizeof(double)));
  if (!is) throw std::runtime_error("noise load: truncated cell data");
  return out;
}

}  // namespace branchmc
