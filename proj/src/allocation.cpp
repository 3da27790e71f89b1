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

#include "thzreach/allocation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

namespace thzreach
{
    std::vector<SubWindow> partition(const SpectralWindow &window, int n_sub)
    {
        if (n_sub < 1)
            throw std::invalid_argument("partition: n_sub must be >= 1");
        if (!(window.f_hi > window.f_lo))
            throw std::invalid_argument("partition: window must have f_lo < f_hi");

        const double width = window.bandwidth() / n_sub;
        const int half = n_sub / 2;
        std::vector<SubWindow> out;
        out.reserve(std::size_t(n_sub));
        for (int i = 0; i < n_sub; ++i)
        {
            int index;
            if (n_sub % 2 == 1)
                index = i - half;
            else
                index = i < half ? i - half : i - half + 1;
            // Pin the outer edges to the parent so the tiling is exact
            const double lo = i == 0 ? window.f_lo : window.f_lo + width * i;
            const double hi = i == n_sub - 1 ? window.f_hi : window.f_lo + width * (i + 1);
            out.push_back({window, index, lo, hi});
        }
        return out;
    }

    Assignment allocate_center_out(std::span<const SubWindow> subs, std::span<const LinkDemand> demands)
    {
        std::set<int> ids;
        for (const auto &d : demands)
        {
            if (!(d.distance_m > 0.0))
                throw std::invalid_argument(fmt::format("allocate_center_out: link {} has non-positive distance", d.link_id));
            if (!ids.insert(d.link_id).second)
                throw std::invalid_argument(fmt::format("allocate_center_out: duplicate link id {}", d.link_id));
        }

        std::vector<LinkDemand> ranked(demands.begin(), demands.end());
        std::sort(ranked.begin(), ranked.end(), [](const LinkDemand &a, const LinkDemand &b)
                  {
                      if (a.distance_m != b.distance_m)
                          return a.distance_m > b.distance_m;
                      return a.link_id < b.link_id; });

        if (ranked.size() > subs.size())
        {
            std::vector<int> left;
            for (std::size_t i = subs.size(); i < ranked.size(); ++i)
                left.push_back(ranked[i].link_id);
            throw allocation_error(fmt::format("{} demands for {} sub-windows; unassigned links: {}", ranked.size(),
                                               subs.size(), fmt::join(left, ", ")),
                                   std::move(left));
        }

        std::vector<SubWindow> order(subs.begin(), subs.end());
        std::sort(order.begin(), order.end(), [](const SubWindow &a, const SubWindow &b)
                  {
                      const int ia = std::abs(a.index_from_center), ib = std::abs(b.index_from_center);
                      if (ia != ib)
                          return ia < ib;
                      return a.f_lo < b.f_lo; });

        Assignment out;
        for (std::size_t i = 0; i < ranked.size(); ++i)
            out.emplace(ranked[i].link_id, order[i]);
        return out;
    }

    std::map<int, double> equal_power_split(double total_power_dbm, const Assignment &assignments)
    {
        if (assignments.empty())
            throw std::invalid_argument("equal_power_split: no assignments");
        const double each = total_power_dbm - 10.0 * std::log10(double(assignments.size()));
        std::map<int, double> out;
        for (const auto &[id, sub] : assignments)
            out.emplace(id, each);
        return out;
    }

    namespace
    {
        // Measure of the part of [lo, hi] covered by the windows
        double covered_bandwidth(double lo, double hi, std::span<const SpectralWindow> windows)
        {
            double sum = 0.0;
            for (const auto &w : windows)
                sum += std::max(0.0, std::min(hi, w.f_hi) - std::max(lo, w.f_lo));
            return sum;
        }
    }

    std::vector<AllocationRow> allocation_report(const AllocationRequest &request, const AbsorptionTable &table,
                                                 const Allocator &allocator)
    {
        const auto subs = partition(request.window, request.n_sub);
        const Assignment assignment = allocator(subs, request.demands);
        const auto power = equal_power_split(request.total_power_dbm, assignment);

        std::vector<AllocationRow> rows;
        for (const auto &d : request.demands)
        {
            const auto it = assignment.find(d.link_id);
            if (it == assignment.end())
                continue;
            AllocationRow row{d.link_id, d.distance_m, it->second, power.at(d.link_id), it->second.bandwidth(), 0.0};

            if (request.distance_aware)
            {
                const Scene free_space;
                const int pts = std::max(2, request.grid_points_per_sub);
                const auto grid = frequency_grid(request.window.f_lo, request.window.f_hi,
                                                 request.window.bandwidth() / (double(pts) * request.n_sub));
                const auto spectrum = path_loss_spectrum(free_space, Vec3::Zero(), Vec3(d.distance_m, 0.0, 0.0), grid,
                                                         table, 0);
                const auto windows = spectral_windows(spectrum, request.window_threshold_db);
                row.usable_bandwidth_hz = covered_bandwidth(row.sub.f_lo, row.sub.f_hi, windows);
            }

            if (row.usable_bandwidth_hz > 0.0)
            {
                const double f = row.sub.center();
                const double gain = -(spreading_loss_db(f, d.distance_m) + absorption_loss_db(f, d.distance_m, table));
                const double snr = row.power_dbm + request.antenna_gain_dbi + gain -
                                   (request.noise_psd_dbm_hz + 10.0 * std::log10(row.usable_bandwidth_hz));
                row.achievable_rate_bps = row.usable_bandwidth_hz * std::log2(1.0 + std::pow(10.0, snr / 10.0));
            }
            rows.push_back(row);
        }
        std::sort(rows.begin(), rows.end(), [](const AllocationRow &a, const AllocationRow &b)
                  { return a.link_id < b.link_id; });
        return rows;
    }

    void write_allocation_csv(std::ostream &os, std::span<const AllocationRow> rows)
    {
        os << "link_id,distance_m,sub_f_lo_hz,sub_f_hi_hz,power_dbm,achievable_rate_bps\n";
        for (const auto &r : rows)
            os << fmt::format("{},{:.6f},{:.6e},{:.6e},{:.6f},{:.6e}\n", r.link_id, r.distance_m, r.sub.f_lo,
                              r.sub.f_hi, r.power_dbm, r.achievable_rate_bps);
    }
}
