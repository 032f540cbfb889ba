#pragma once

// Link-level environment: a base station at a fixed point and one user that
// moves and spins inside a disc, with per-slot blockage and shadowing, flat-top
// sector beams, a two-stage beam sweep and the data phase that follows it.

#include <cstdint>
#include <span>
#include <vector>

#include "beamband/rng.hpp"

namespace beamband {

struct LinkBudget {
  double tx_power_dbm = 15.0;
  double carrier_ghz = 60.0;
  double bandwidth_hz = 2.16e9;
  double noise_figure_db = 7.0;
  double block_loss_db = 20.0;
  double block_prob = 0.13;
  double se_cap_bps_hz = 4.6;
  double sidelobe_gain_dbi = -30.0;

  double noise_power_dbm() const;
  // bandwidth * se_cap; the normalization constant for rewards.
  double max_rate_bps() const { return bandwidth_hz * se_cap_bps_hz; }
};

struct EnvParams {
  LinkBudget budget;

  double bs_x_m = 12.0;
  double bs_y_m = 12.0;
  double disc_center_x_m = 21.21;
  double disc_center_y_m = 21.21;
  double disc_radius_m = 10.0;

  double speed_min_mps = 5.0;
  double speed_max_mps = 10.0;
  double rotation_rate_max_deg_s = 10.0;
  double heading_noise_deg_sqrt_s = 5.0;
  double shadowing_std_db = 1.4142135623730951;  // variance 2 dB^2

  double measurement_s = 10e-6;
  double elevation_beamwidth_deg = 75.0;
  int ue_sectors = 16;
  double quasi_omni_gain_dbi = 0.0;
  double connect_threshold_db = 0.0;
  double substep_s = 1e-3;
  double min_distance_m = 1.0;
};

struct WorldState {
  double x_m = 0.0;
  double y_m = 0.0;
  double heading_rad = 0.0;
  double speed_mps = 0.0;
  double orientation_rad = 0.0;
  double rotation_rate_rad_s = 0.0;
  bool blocked = false;
  double shadowing_db = 0.0;
};

enum class Side { kBs, kUe };

/// N_s sectors of width 360/N_s degrees, boresight of beam b at b * width.
class Codebook {
 public:
  Codebook(Side side, int num_sectors, double elevation_beamwidth_deg = 75.0);

  Side side() const noexcept { return side_; }
  int num_sectors() const noexcept { return static_cast<int>(boresights_.size()); }
  std::span<const double> boresights() const noexcept { return boresights_; }
  double az_beamwidth_deg() const noexcept { return 360.0 / num_sectors(); }
  double az_beamwidth_rad() const noexcept;
  double el_beamwidth_deg() const noexcept { return el_beamwidth_deg_; }
  // 10 log10(41253 / (az * el)), both in degrees.
  double mainlobe_gain_dbi() const noexcept { return mainlobe_dbi_; }

 private:
  Side side_;
  std::vector<double> boresights_;
  double el_beamwidth_deg_;
  double mainlobe_dbi_;
};

WorldState init_realization(std::uint64_t seed, const EnvParams& params);

// Per-slot draws: blockage, shadowing and a fresh rotation rate.
void begin_slot(WorldState& state, const EnvParams& params, Rng& rng);

// Moves the user for dt seconds, reflecting off the disc boundary.
WorldState step_mobility(const WorldState& state, double dt, const EnvParams& params, Rng& rng);

double path_loss_db(double distance_m, double carrier_ghz, double shadowing_db,
                    double min_distance_m = 1.0);

// Flat-top sector gain. For UE codebooks pass the body orientation as
// pointing_angle; BS codebooks use 0.
double beam_gain_dbi(const Codebook& codebook, int beam, double los_angle, double pointing_angle,
                     double sidelobe_gain_dbi);

double snr_db(const LinkBudget& budget, double path_loss, double g_tx_dbi, double g_rx_dbi,
              bool blocked);

// Spectral-efficiency-capped Shannon rate in bit/s.
double capped_rate_bps(const LinkBudget& budget, double snr);

struct Geometry {
  double distance_m;
  double bs_to_ue_rad;  // LOS azimuth seen from the BS
  double ue_to_bs_rad;  // LOS azimuth seen from the UE, world frame
};
Geometry link_geometry(const WorldState& state, const EnvParams& params);

struct BeamPair {
  int bs_beam = -1;
  int ue_beam = -1;
  friend bool operator==(const BeamPair&, const BeamPair&) = default;
};

struct BeamMeasurement {
  int bs_beam;
  int ue_beam;  // -1: quasi-omni UE pattern (first stage)
  double snr_db;
};

struct SweepResult {
  std::vector<BeamMeasurement> measurements;
  BeamPair best_pair;
  double best_snr_db = 0.0;
  double overhead_s = 0.0;
  // One entry per swept BS beam, in swept order.
  std::vector<std::pair<int, bool>> connects;
};

double sweep_overhead_s(std::size_t swept_bs_beams, int ue_beams, const EnvParams& params);

// Stage 1: every swept BS beam against the quasi-omni UE. Stage 2: the best
// stage-1 BS beam against every UE beam.
SweepResult sweep(const WorldState& world, const Codebook& bs, const Codebook& ue,
                  std::span<const int> swept_bs_beams, const EnvParams& params);

// SNR of a fixed beam pair at the current world state.
double pair_snr_db(const WorldState& world, const Codebook& bs, const Codebook& ue,
                   const BeamPair& pair, const EnvParams& params);

// Advances the world through one slot (overhead, then data in substeps) and
// returns the delivered bits divided by slot duration, in Gbps.
double slot_effective_rate(WorldState& world, const Codebook& bs, const Codebook& ue,
                           const BeamPair& chosen, double slot_s, double overhead_s,
                           const EnvParams& params, Rng& rng);

}  // namespace beamband
