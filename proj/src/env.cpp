#include "beamband/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "beamband/errors.hpp"
#include "beamband/kernels.hpp"

namespace beamband {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDegToRad = kPi / 180.0;
// Isotropic directivity numerator, square degrees.
constexpr double kSphereSqDeg = 41253.0;
}  // namespace

double LinkBudget::noise_power_dbm() const {
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

Codebook::Codebook(Side side, int num_sectors, double elevation_beamwidth_deg)
    : side_(side), el_beamwidth_deg_(elevation_beamwidth_deg) {
  if (num_sectors <= 0) throw PreconditionError("Codebook: num_sectors must be positive");
  if (!(elevation_beamwidth_deg > 0.0)) throw PreconditionError("Codebook: elevation beamwidth must be positive");
  const double step = 2.0 * kPi / num_sectors;
  boresights_.resize(static_cast<std::size_t>(num_sectors));
  for (int b = 0; b < num_sectors; ++b) boresights_[b] = b * step;
  mainlobe_dbi_ = 10.0 * std::log10(kSphereSqDeg / (az_beamwidth_deg() * el_beamwidth_deg_));
}

double Codebook::az_beamwidth_rad() const noexcept { return 2.0 * kPi / num_sectors(); }

WorldState init_realization(std::uint64_t seed, const EnvParams& params) {
  Rng rng(seed);
  WorldState s;
  const double r = params.disc_radius_m;
  double ox, oy;
  do {
    ox = r * (2.0 * rng.uniform() - 1.0);
    oy = r * (2.0 * rng.uniform() - 1.0);
  } while (ox * ox + oy * oy > r * r);
  s.x_m = params.disc_center_x_m + ox;
  s.y_m = params.disc_center_y_m + oy;
  s.heading_rad = rng.uniform(0.0, 2.0 * kPi);
  s.speed_mps = rng.uniform(params.speed_min_mps, params.speed_max_mps);
  s.orientation_rad = rng.uniform(0.0, 2.0 * kPi);
  const double rate = rng.uniform(0.0, params.rotation_rate_max_deg_s) * kDegToRad;
  s.rotation_rate_rad_s = rng.uniform() < 0.5 ? -rate : rate;
  return s;
}

void begin_slot(WorldState& state, const EnvParams& params, Rng& rng) {
  state.blocked = rng.bernoulli(params.budget.block_prob);
  state.shadowing_db = rng.normal(0.0, params.shadowing_std_db);
  const double rate = rng.uniform(0.0, params.rotation_rate_max_deg_s) * kDegToRad;
  state.rotation_rate_rad_s = rng.uniform() < 0.5 ? -rate : rate;
}

WorldState step_mobility(const WorldState& state, double dt, const EnvParams& params, Rng& rng) {
  if (!(dt > 0.0)) throw PreconditionError("step_mobility: dt must be positive");
  WorldState s = state;
  s.heading_rad += params.heading_noise_deg_sqrt_s * kDegToRad * std::sqrt(dt) * rng.normal();
  s.orientation_rad += s.rotation_rate_rad_s * dt;

  const double r = params.disc_radius_m;
  double px = s.x_m - params.disc_center_x_m;
  double py = s.y_m - params.disc_center_y_m;
  double dx = std::cos(s.heading_rad);
  double dy = std::sin(s.heading_rad);
  double remaining = s.speed_mps * dt;
  bool reflected = false;

  for (int bounce = 0; bounce < 64 && remaining > 0.0; ++bounce) {
    if (r <= 0.0) {
      px = py = 0.0;
      break;
    }
    // Forward distance to the circle along (dx, dy).
    const double pd = px * dx + py * dy;
    const double c = px * px + py * py - r * r;
    const double t = -pd + std::sqrt(std::max(pd * pd - c, 0.0));
    if (t >= remaining) {
      px += remaining * dx;
      py += remaining * dy;
      break;
    }
    px += t * dx;
    py += t * dy;
    remaining -= t;
    const double nx = px / r;
    const double ny = py / r;
    const double dn = dx * nx + dy * ny;
    dx -= 2.0 * dn * nx;
    dy -= 2.0 * dn * ny;
    reflected = true;
  }
  const double dist = std::hypot(px, py);
  if (dist > r) {
    px *= r / dist;
    py *= r / dist;
  }
  s.x_m = params.disc_center_x_m + px;
  s.y_m = params.disc_center_y_m + py;
  if (reflected) s.heading_rad = std::atan2(dy, dx);
  return s;
}

double path_loss_db(double distance_m, double carrier_ghz, double shadowing_db, double min_distance_m) {
  if (!(distance_m > 0.0)) throw DomainError("path_loss_db: distance must be positive");
  if (!(carrier_ghz > 0.0)) throw DomainError("path_loss_db: carrier frequency must be positive");
  const double d = std::max(distance_m, min_distance_m);
  return 28.0 + 22.0 * std::log10(d) + 20.0 * std::log10(carrier_ghz) + shadowing_db;
}

double beam_gain_dbi(const Codebook& codebook, int beam, double los_angle, double pointing_angle,
                     double sidelobe_gain_dbi) {
  if (beam < 0 || beam >= codebook.num_sectors()) throw PreconditionError("beam_gain_dbi: beam out of range");
  double gain = 0.0;
  kernels::scalar::sector_gains(codebook.boresights().subspan(static_cast<std::size_t>(beam), 1),
                                los_angle - pointing_angle, 0.5 * codebook.az_beamwidth_rad(),
                                codebook.mainlobe_gain_dbi(), sidelobe_gain_dbi, {&gain, 1});
  return gain;
}

double snr_db(const LinkBudget& budget, double path_loss, double g_tx_dbi, double g_rx_dbi, bool blocked) {
  return budget.tx_power_dbm + g_tx_dbi + g_rx_dbi - path_loss - (blocked ? budget.block_loss_db : 0.0) -
         budget.noise_power_dbm();
}

double capped_rate_bps(const LinkBudget& budget, double snr) {
  const double se = std::log2(1.0 + std::pow(10.0, snr / 10.0));
  return budget.bandwidth_hz * std::min(se, budget.se_cap_bps_hz);
}

Geometry link_geometry(const WorldState& state, const EnvParams& params) {
  const double dx = state.x_m - params.bs_x_m;
  const double dy = state.y_m - params.bs_y_m;
  return {std::hypot(dx, dy), std::atan2(dy, dx), std::atan2(-dy, -dx)};
}

double sweep_overhead_s(std::size_t swept_bs_beams, int ue_beams, const EnvParams& params) {
  return static_cast<double>(swept_bs_beams + static_cast<std::size_t>(ue_beams)) * params.measurement_s;
}

SweepResult sweep(const WorldState& world, const Codebook& bs, const Codebook& ue,
                  std::span<const int> swept_bs_beams, const EnvParams& params) {
  if (swept_bs_beams.empty()) throw PreconditionError("sweep: swept set is empty");
  const auto& budget = params.budget;
  const Geometry g = link_geometry(world, params);
  const double pl = path_loss_db(g.distance_m, budget.carrier_ghz, world.shadowing_db, params.min_distance_m);

  const std::size_t n = swept_bs_beams.size();
  std::vector<double> boresights(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int b = swept_bs_beams[i];
    if (b < 0 || b >= bs.num_sectors()) throw PreconditionError("sweep: BS beam out of range");
    boresights[i] = bs.boresights()[static_cast<std::size_t>(b)];
  }
  std::vector<double> gains(n);
  kernels::sector_gains(boresights, g.bs_to_ue_rad - 0.0, 0.5 * bs.az_beamwidth_rad(), bs.mainlobe_gain_dbi(),
                        budget.sidelobe_gain_dbi, gains);

  SweepResult out;
  out.overhead_s = sweep_overhead_s(n, ue.num_sectors(), params);
  out.measurements.reserve(n + static_cast<std::size_t>(ue.num_sectors()));
  out.connects.reserve(n);
  std::size_t best_stage1 = 0;
  double best_stage1_snr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double snr = snr_db(budget, pl, gains[i], params.quasi_omni_gain_dbi, world.blocked);
    out.measurements.push_back({swept_bs_beams[i], -1, snr});
    out.connects.emplace_back(swept_bs_beams[i], snr >= params.connect_threshold_db);
    if (i == 0 || snr > best_stage1_snr) {
      best_stage1 = i;
      best_stage1_snr = snr;
    }
  }

  const int bs_beam = swept_bs_beams[best_stage1];
  const double g_bs = gains[best_stage1];
  std::vector<double> ue_gains(static_cast<std::size_t>(ue.num_sectors()));
  kernels::sector_gains(ue.boresights(), g.ue_to_bs_rad - world.orientation_rad, 0.5 * ue.az_beamwidth_rad(),
                        ue.mainlobe_gain_dbi(), budget.sidelobe_gain_dbi, ue_gains);
  out.best_pair = {bs_beam, 0};
  for (int u = 0; u < ue.num_sectors(); ++u) {
    const double snr = snr_db(budget, pl, g_bs, ue_gains[static_cast<std::size_t>(u)], world.blocked);
    out.measurements.push_back({bs_beam, u, snr});
    if (u == 0 || snr > out.best_snr_db) {
      out.best_pair.ue_beam = u;
      out.best_snr_db = snr;
    }
  }
  return out;
}

double pair_snr_db(const WorldState& world, const Codebook& bs, const Codebook& ue, const BeamPair& pair,
                   const EnvParams& params) {
  const auto& budget = params.budget;
  const Geometry g = link_geometry(world, params);
  const double pl = path_loss_db(g.distance_m, budget.carrier_ghz, world.shadowing_db, params.min_distance_m);
  const double g_bs = beam_gain_dbi(bs, pair.bs_beam, g.bs_to_ue_rad, 0.0, budget.sidelobe_gain_dbi);
  const double g_ue = beam_gain_dbi(ue, pair.ue_beam, g.ue_to_bs_rad, world.orientation_rad, budget.sidelobe_gain_dbi);
  return snr_db(budget, pl, g_bs, g_ue, world.blocked);
}

double slot_effective_rate(WorldState& world, const Codebook& bs, const Codebook& ue, const BeamPair& chosen,
                           double slot_s, double overhead_s, const EnvParams& params, Rng& rng) {
  if (!(slot_s > 0.0)) throw PreconditionError("slot_effective_rate: slot duration must be positive");
  if (!(overhead_s >= 0.0)) throw PreconditionError("slot_effective_rate: overhead must be nonnegative");
  const double step = params.substep_s;
  if (!(step > 0.0)) throw PreconditionError("slot_effective_rate: substep must be positive");

  // Fixed substep grid; the last step of each phase may be shorter.
  auto for_each_substep = [step](double span, auto&& fn) {
    const auto count = static_cast<long>(std::ceil(span / step - 1e-9));
    for (long k = 0; k < count; ++k) {
      const double dt = std::min(step, span - static_cast<double>(k) * step);
      if (dt <= 0.0) break;
      fn(dt);
    }
  };

  for_each_substep(std::min(overhead_s, slot_s), [&](double dt) { world = step_mobility(world, dt, params, rng); });
  if (overhead_s >= slot_s) return 0.0;

  double bits = 0.0;
  for_each_substep(slot_s - overhead_s, [&](double dt) {
    world = step_mobility(world, dt, params, rng);
    bits += capped_rate_bps(params.budget, pair_snr_db(world, bs, ue, chosen, params)) * dt;
  });
  return bits / slot_s * 1e-9;
}

}  // namespace beamband
