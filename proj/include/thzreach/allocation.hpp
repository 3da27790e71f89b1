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

#ifndef THZREACH_ALLOCATION_HPP
#define THZREACH_ALLOCATION_HPP

#include "thzreach/channel.hpp"
#include "thzreach/errors.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace thzreach
{
    struct SubWindow
    {
        SpectralWindow parent;
        int index_from_center = 0; // 0 at the center (odd counts), +-1 adjacent to it, growing outward
        double f_lo = 0.0;
        double f_hi = 0.0;

        double center() const { return 0.5 * (f_lo + f_hi); }
        double bandwidth() const { return f_hi - f_lo; }
    };

    struct LinkDemand
    {
        int link_id = 0;
        double distance_m = 0.0;
        std::optional<double> min_rate_bps;
    };

    using Assignment = std::map<int, SubWindow>; // link_id -> sub-window

    // Signature shared by allocators; allocate_center_out is the default
    using Allocator = std::function<Assignment(std::span<const SubWindow>, std::span<const LinkDemand>)>;

    /// n_sub equal-width contiguous sub-windows, ordered by frequency.
    /// Odd n: indices -(n-1)/2 .. (n-1)/2. Even n: -n/2 .. -1, +1 .. n/2 (no zero).
    std::vector<SubWindow> partition(const SpectralWindow &window, int n_sub);

    /// Longest links get the sub-windows closest to the center.
    /// Demands are ranked by distance (descending, then link_id ascending) and paired with the
    /// sub-windows ranked by |index| (then lower frequency first).
    /// Throws allocation_error naming the links left over when there are more demands than sub-windows.
    Assignment allocate_center_out(std::span<const SubWindow> subs, std::span<const LinkDemand> demands);

    /// Splits total power evenly: each assigned link gets total - 10 log10(n) dBm
    std::map<int, double> equal_power_split(double total_power_dbm, const Assignment &assignments);

    struct AllocationRequest
    {
        SpectralWindow window;
        int n_sub = 1;
        std::vector<LinkDemand> demands;
        double total_power_dbm = 10.0;
        double noise_psd_dbm_hz = -160.0;
        double antenna_gain_dbi = 0.0; // sum of tx and rx gains
        // Distance-aware mode: usable bandwidth of a link is its sub-window clipped to the spectral
        // windows of a free-space link at its distance
        bool distance_aware = false;
        double window_threshold_db = default_window_threshold_db;
        int grid_points_per_sub = 64;
    };

    struct AllocationRow
    {
        int link_id = 0;
        double distance_m = 0.0;
        SubWindow sub;
        double power_dbm = 0.0;
        double usable_bandwidth_hz = 0.0;
        double achievable_rate_bps = 0.0;
    };

    /// Partition, allocate, split power and estimate each link's rate as a free-space LOS link at its
    /// distance, evaluated at the sub-window center frequency.
    std::vector<AllocationRow> allocation_report(const AllocationRequest &request, const AbsorptionTable &table,
                                                 const Allocator &allocator = allocate_center_out);

    // CSV: link_id,distance_m,sub_f_lo_hz,sub_f_hi_hz,power_dbm,achievable_rate_bps
    void write_allocation_csv(std::ostream &os, std::span<const AllocationRow> rows);
}

#endif
