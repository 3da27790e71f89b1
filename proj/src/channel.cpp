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

#include "thzreach/channel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace thzreach
{
    namespace
    {
        const double ten_log10_e = 10.0 * std::log10(std::numbers::e);

        std::string_view trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        bool parse_double(std::string_view s, double &out)
        {
            s = trim(s);
            if (s.empty())
                return false;
            if (s.front() == '+')
                s.remove_prefix(1);
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
            return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
        }
    }

    AbsorptionTable::AbsorptionTable(std::vector<Sample> samples) : samples_(std::move(samples))
    {
        if (samples_.empty())
            throw std::invalid_argument("AbsorptionTable: no samples");
        for (std::size_t i = 0; i < samples_.size(); ++i)
        {
            const auto &s = samples_[i];
            if (!std::isfinite(s.frequency_hz) || !std::isfinite(s.k_per_m))
                throw std::invalid_argument(fmt::format("AbsorptionTable: non-finite sample {}", i));
            if (s.k_per_m < 0.0)
                throw std::invalid_argument(
                    fmt::format("AbsorptionTable: negative k = {} at {} Hz", s.k_per_m, s.frequency_hz));
            if (i > 0 && !(s.frequency_hz > samples_[i - 1].frequency_hz))
                throw std::invalid_argument(fmt::format(
                    "AbsorptionTable: frequencies not strictly increasing at {} Hz (sample {})", s.frequency_hz, i));
        }
    }

    double AbsorptionTable::k_at(double f_hz) const
    {
        if (!in_range(f_hz))
            throw std::out_of_range(fmt::format("Frequency {:g} Hz outside absorption table range [{:g}, {:g}] Hz", f_hz,
                                                f_min(), f_max()));
        auto it = std::lower_bound(samples_.begin(), samples_.end(), f_hz,
                                   [](const Sample &s, double f)
                                   { return s.frequency_hz < f; });
        if (it->frequency_hz == f_hz)
            return it->k_per_m;
        const Sample &hi = *it, &lo = *(it - 1);
        const double t = (f_hz - lo.frequency_hz) / (hi.frequency_hz - lo.frequency_hz);
        return lo.k_per_m + t * (hi.k_per_m - lo.k_per_m);
    }

    AbsorptionTable transparent_table(double f_lo_hz, double f_hi_hz)
    {
        return AbsorptionTable({{f_lo_hz, 0.0}, {f_hi_hz, 0.0}});
    }

    const AbsorptionTable &synthetic_absorption_table()
    {
        static const AbsorptionTable table = []
        {
            struct Line
            {
                double f0, peak, hwhm;
            };
            constexpr Line lines[] = {{0.557e12, 3.0, 4e9}, {0.752e12, 2.0, 4e9}, {0.988e12, 1.0, 2e9}};
            std::vector<AbsorptionTable::Sample> samples;
            for (long i = 0; i <= 7960; ++i)
            {
                const double f = 10e9 + 0.25e9 * double(i);
                double k = 1e-4 * (f / 100e9) * (f / 100e9);
                for (const auto &l : lines)
                {
                    const double x = (f - l.f0) / l.hwhm;
                    k += l.peak / (1.0 + x * x);
                }
                samples.push_back({f, k});
            }
            return AbsorptionTable(std::move(samples));
        }();
        return table;
    }

    AbsorptionTable load_absorption_table(std::istream &in)
    {
        std::vector<AbsorptionTable::Sample> samples;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line))
        {
            ++line_no;
            const std::string_view body = trim(line);
            if (body.empty() || body.front() == '#')
                continue;
            const auto comma = body.find(',');
            double f = 0.0, k = 0.0;
            if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos ||
                !parse_double(body.substr(0, comma), f) || !parse_double(body.substr(comma + 1), k))
                throw parse_error(fmt::format("line {}: expected 'frequency_hz,k_per_m', got '{}'", line_no, body),
                                  line_no);
            if (k < 0.0)
                throw std::invalid_argument(fmt::format("line {}: negative absorption coefficient {}", line_no, k));
            if (!samples.empty() && !(f > samples.back().frequency_hz))
                throw std::invalid_argument(
                    fmt::format("line {}: frequency {} Hz is not greater than the previous row", line_no, f));
            samples.push_back({f, k});
        }
        if (samples.empty())
            throw parse_error("absorption table has no data rows", line_no);
        return AbsorptionTable(std::move(samples));
    }

    AbsorptionTable load_absorption_file(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error(fmt::format("{}: cannot open absorption table", path));
        try
        {
            return load_absorption_table(in);
        }
        catch (const parse_error &e)
        {
            throw parse_error(fmt::format("{}: {}", path, e.what()), e.line());
        }
        catch (const std::invalid_argument &e)
        {
            throw std::invalid_argument(fmt::format("{}: {}", path, e.what()));
        }
    }

    void write_absorption_table(std::ostream &os, const AbsorptionTable &table)
    {
        os << "# frequency_hz,k_per_m\n";
        for (const auto &s : table.samples())
            os << fmt::format("{},{}\n", s.frequency_hz, s.k_per_m); // shortest exact round trip
    }

    double spreading_loss_db(double f_hz, double d_m)
    {
        if (!(f_hz > 0.0) || !(d_m > 0.0))
            throw std::invalid_argument("spreading_loss_db: frequency and distance must be positive");
        return 20.0 * std::log10(4.0 * std::numbers::pi * d_m * f_hz / speed_of_light);
    }

    double absorption_loss_db(double f_hz, double d_m, const AbsorptionTable &table)
    {
        if (!(d_m >= 0.0))
            throw std::invalid_argument("absorption_loss_db: distance must be non-negative");
        return ten_log10_e * table.k_at(f_hz) * d_m;
    }

    PathGain path_gain(const PropagationPath &path, double f_hz, const Scene &scene, const AbsorptionTable &table)
    {
        if (path.kind == PathKind::surface_assisted)
            throw std::invalid_argument("path_gain: surface-assisted paths carry tile losses; use assisted_paths");
        PathGain g;
        g.path = path;
        g.frequency_hz = f_hz;
        g.absorption_loss_db = absorption_loss_db(f_hz, path.length_m, table);
        g.spreading_loss_db = spreading_loss_db(f_hz, path.length_m);
        for (int id : path.bounce_surfaces)
            g.reflection_loss_db += -10.0 * std::log10(scene.material_of(scene.surface(id)).reflectance);
        g.total_gain_db = -(g.spreading_loss_db + g.absorption_loss_db + g.reflection_loss_db);
        return g;
    }

    double power_sum_db(std::span<const double> gains_db)
    {
        if (gains_db.empty())
            throw outage_error("no propagation path: link is in outage");
        // Factor out the maximum so that very small gains do not underflow
        const double peak = *std::max_element(gains_db.begin(), gains_db.end());
        if (peak == -std::numeric_limits<double>::infinity())
            return peak;
        double sum = 0.0;
        for (double g : gains_db)
            sum += std::pow(10.0, (g - peak) / 10.0);
        return peak + 10.0 * std::log10(sum);
    }

    double aggregate_gain_db(std::span<const PathGain> paths)
    {
        if (paths.empty())
            throw outage_error("no propagation path: link is in outage");
        std::vector<double> gains;
        gains.reserve(paths.size());
        for (const auto &p : paths)
        {
            if (p.frequency_hz != paths.front().frequency_hz)
                throw std::invalid_argument("aggregate_gain_db: paths evaluated at different frequencies");
            gains.push_back(p.total_gain_db);
        }
        return power_sum_db(gains);
    }

    std::vector<SpectrumSample> path_loss_spectrum(const Scene &scene, const Vec3 &tx, const Vec3 &rx,
                                                   std::span<const double> f_grid, const AbsorptionTable &table,
                                                   int max_order)
    {
        for (double f : f_grid)
            if (!table.in_range(f))
                throw std::out_of_range(fmt::format("Frequency {:g} Hz outside absorption table range [{:g}, {:g}] Hz", f,
                                                    table.f_min(), table.f_max()));
        const auto paths = trace_paths(scene, tx, rx, max_order);
        std::vector<SpectrumSample> out;
        out.reserve(f_grid.size());
        std::vector<PathGain> gains;
        for (double f : f_grid)
        {
            if (paths.empty())
            {
                out.push_back({f, std::nullopt});
                continue;
            }
            gains.clear();
            for (const auto &p : paths)
                gains.push_back(path_gain(p, f, scene, table));
            out.push_back({f, -aggregate_gain_db(gains)});
        }
        return out;
    }

    void write_spectrum_csv(std::ostream &os, std::span<const SpectrumSample> spectrum)
    {
        os << "frequency_hz,path_loss_db\n";
        for (const auto &s : spectrum)
        {
            if (s.path_loss_db)
                os << fmt::format("{:.6e},{:.6f}\n", s.frequency_hz, *s.path_loss_db);
            else
                os << fmt::format("{:.6e},\n", s.frequency_hz);
        }
    }

    std::vector<SpectralWindow> spectral_windows(std::span<const SpectrumSample> spectrum, double threshold_db)
    {
        if (spectrum.empty())
            throw std::invalid_argument("spectral_windows: empty spectrum");
        const std::size_t n = spectrum.size();
        constexpr double inf = std::numeric_limits<double>::infinity();
        std::vector<double> loss(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            if (i > 0 && !(spectrum[i].frequency_hz > spectrum[i - 1].frequency_hz))
                throw std::invalid_argument("spectral_windows: spectrum must be sorted by frequency");
            loss[i] = spectrum[i].path_loss_db.value_or(inf);
        }

        // Band boundaries: both ends plus every local maximum (first index of a plateau)
        std::vector<std::size_t> bounds{0};
        for (std::size_t i = 1; i + 1 < n; ++i)
            if (loss[i] > loss[i - 1] && loss[i] >= loss[i + 1])
                bounds.push_back(i);
        bounds.push_back(n - 1);

        std::vector<bool> marked(n, false);
        for (std::size_t b = 0; b + 1 < bounds.size(); ++b)
        {
            const std::size_t lo = bounds[b], hi = bounds[b + 1];
            const double band_min = *std::min_element(loss.begin() + lo, loss.begin() + hi + 1);
            if (band_min == inf)
                continue;
            for (std::size_t i = lo; i <= hi; ++i)
                if (loss[i] <= band_min + threshold_db)
                    marked[i] = true;
        }

        std::vector<SpectralWindow> out;
        std::size_t i = 0;
        while (i < n)
        {
            if (!marked[i])
            {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j + 1 < n && marked[j + 1])
                ++j;
            if (j > i)
                out.push_back({spectrum[i].frequency_hz, spectrum[j].frequency_hz});
            i = j + 1;
        }
        return out;
    }

    double total_bandwidth(std::span<const SpectralWindow> windows)
    {
        double sum = 0.0;
        for (const auto &w : windows)
            sum += w.bandwidth();
        return sum;
    }

    std::vector<double> frequency_grid(double f_lo_hz, double f_hi_hz, double step_hz)
    {
        if (!(step_hz > 0.0) || !(f_hi_hz >= f_lo_hz))
            throw std::invalid_argument("frequency_grid: need step > 0 and f_hi >= f_lo");
        const auto n = static_cast<std::size_t>(std::floor((f_hi_hz - f_lo_hz) / step_hz + 1e-9)) + 1;
        std::vector<double> grid(n);
        for (std::size_t i = 0; i < n; ++i)
            grid[i] = f_lo_hz + step_hz * double(i);
        return grid;
    }
}
