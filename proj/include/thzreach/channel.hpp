// SPDX-License-Identifier: Apache-2.0
//
// thzreach - mm-wave and THz indoor propagation and link-budget simulator
// Copyright (C) 2026 The thzreach authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef THZREACH_CHANNEL_HPP
#define THZREACH_CHANNEL_HPP

#include "thzreach/errors.hpp"
#include "thzreach/geometry.hpp"
#include "thzreach/raytracer.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace thzreach
{
    inline constexpr double speed_of_light = 299792458.0; // m/s

    // Molecular absorption coefficient k(f) in 1/m, sampled on a strictly increasing frequency grid.
    // Lookups interpolate linearly; frequencies outside the sampled range are rejected.
    class AbsorptionTable
    {
    public:
        struct Sample
        {
            double frequency_hz;
            double k_per_m;
        };

        explicit AbsorptionTable(std::vector<Sample> samples); // throws std::invalid_argument

        const std::vector<Sample> &samples() const { return samples_; }
        double f_min() const { return samples_.front().frequency_hz; }
        double f_max() const { return samples_.back().frequency_hz; }
        bool in_range(double f_hz) const { return f_hz >= f_min() && f_hz <= f_max(); }

        double k_at(double f_hz) const; // throws std::out_of_range naming the table bounds

    private:
        std::vector<Sample> samples_;
    };

    // Table with k = 0 over [f_lo, f_hi]
    AbsorptionTable transparent_table(double f_lo_hz = 1e9, double f_hi_hz = 10e12);

    /// Built-in synthetic absorption table, 10 GHz to 2 THz in 0.25 GHz steps.
    /// The values are illustrative, not measured: a quadratic floor
    /// k0 = 1e-4 * (f / 100 GHz)^2 plus Lorentzian lines at 0.557 THz (3 /m, 4 GHz HWHM),
    /// 0.752 THz (2 /m, 4 GHz HWHM) and 0.988 THz (1 /m, 2 GHz HWHM).
    const AbsorptionTable &synthetic_absorption_table();

    /// Two-column CSV reader: "frequency_hz,k_per_m" per line; '#' comments and blank lines skipped.
    /// Malformed lines raise parse_error with the line number. Non-monotone frequencies or negative k
    /// raise std::invalid_argument; input is never re-sorted.
    AbsorptionTable load_absorption_table(std::istream &in);
    AbsorptionTable load_absorption_file(const std::string &path);
    void write_absorption_table(std::ostream &os, const AbsorptionTable &table);

    // Friis spreading loss 20 log10(4 pi d f / c)
    double spreading_loss_db(double f_hz, double d_m);

    // Beer-Lambert absorption 10 log10(e) k(f) d
    double absorption_loss_db(double f_hz, double d_m, const AbsorptionTable &table);

    struct PathGain
    {
        PropagationPath path;
        double frequency_hz = 0.0;
        double spreading_loss_db = 0.0;
        double absorption_loss_db = 0.0;
        double reflection_loss_db = 0.0; // per-bounce reflectance, or redirection loss for assisted paths
        double total_gain_db = 0.0;      // -(spreading + absorption + reflection)
    };

    // Surface-assisted paths are rejected here; see assisted_paths() in surfaces.hpp
    PathGain path_gain(const PropagationPath &path, double f_hz, const Scene &scene, const AbsorptionTable &table);

    // Incoherent power sum of path gains at a single frequency. Throws outage_error if empty.
    double aggregate_gain_db(std::span<const PathGain> paths);

    // 10 log10(sum 10^(x/10)); throws outage_error if empty
    double power_sum_db(std::span<const double> gains_db);

    struct SpectrumSample
    {
        double frequency_hz = 0.0;
        std::optional<double> path_loss_db; // empty when the link has no path
    };

    // Paths are traced once; each grid frequency is evaluated against the same path set
    std::vector<SpectrumSample> path_loss_spectrum(const Scene &scene, const Vec3 &tx, const Vec3 &rx,
                                                   std::span<const double> f_grid, const AbsorptionTable &table,
                                                   int max_order = max_reflection_order);

    void write_spectrum_csv(std::ostream &os, std::span<const SpectrumSample> spectrum);

    struct SpectralWindow
    {
        double f_lo = 0.0;
        double f_hi = 0.0;
        double center() const { return 0.5 * (f_lo + f_hi); }
        double bandwidth() const { return f_hi - f_lo; }
        bool operator==(const SpectralWindow &) const = default;
    };

    inline constexpr double default_window_threshold_db = 3.0;

    /// Splits the spectrum into bands at local maxima of the path loss; inside each band the window
    /// is every sample within threshold_db of the band minimum. Overlapping marks merge, so the
    /// result is the maximal contiguous runs, sorted and non-overlapping. Runs of a single sample
    /// and absent samples are dropped. Throws std::invalid_argument on an empty or unsorted spectrum.
    std::vector<SpectralWindow> spectral_windows(std::span<const SpectrumSample> spectrum,
                                                 double threshold_db = default_window_threshold_db);

    double total_bandwidth(std::span<const SpectralWindow> windows);

    // Evenly spaced grid [f_lo, f_hi] with the given step; includes f_hi when it lands on the grid
    std::vector<double> frequency_grid(double f_lo_hz, double f_hi_hz, double step_hz);
}

#endif
