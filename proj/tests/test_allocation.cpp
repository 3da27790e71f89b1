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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

using namespace thzreach;
using Catch::Approx;

namespace
{
    const SpectralWindow band{0.2e12, 0.3e12};

    std::vector<LinkDemand> demands(std::vector<double> distances)
    {
        std::vector<LinkDemand> out;
        for (std::size_t i = 0; i < distances.size(); ++i)
            out.push_back({int(i), distances[i], std::nullopt});
        return out;
    }
}

TEST_CASE("partition - examples")
{
    const auto one = partition(band, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].f_lo == band.f_lo);
    CHECK(one[0].f_hi == band.f_hi);
    CHECK(one[0].index_from_center == 0);

    const auto three = partition(band, 3);
    REQUIRE(three.size() == 3);
    for (const auto &s : three)
        CHECK(s.bandwidth() == Approx(100e9 / 3.0).epsilon(1e-12));
    CHECK(three[1].index_from_center == 0);
    CHECK(three[0].index_from_center == -1);
    CHECK(three[2].index_from_center == 1);

    const auto four = partition(band, 4);
    std::vector<int> idx;
    for (const auto &s : four)
        idx.push_back(s.index_from_center);
    CHECK(idx == std::vector<int>{-2, -1, 1, 2});

    CHECK_THROWS_AS(partition(band, 0), std::invalid_argument);
    CHECK_THROWS_AS(partition({1e11, 1e11}, 2), std::invalid_argument);
}

TEST_CASE("partition - exact tiling and index ordering")
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> uf(1e10, 1e12), uw(1e9, 2e11);
    std::uniform_int_distribution<int> un(1, 40);
    for (int i = 0; i < 1000; ++i)
    {
        const double lo = uf(rng);
        const SpectralWindow w{lo, lo + uw(rng)};
        const auto subs = partition(w, un(rng));
        CHECK(subs.front().f_lo == w.f_lo);
        CHECK(subs.back().f_hi == w.f_hi);
        double total = 0.0;
        for (std::size_t k = 0; k < subs.size(); ++k)
        {
            CHECK(subs[k].f_lo < subs[k].f_hi);
            CHECK(subs[k].parent == w);
            total += subs[k].bandwidth();
            if (k > 0)
                CHECK(subs[k].f_lo == subs[k - 1].f_hi);
        }
        CHECK(total == Approx(w.bandwidth()).epsilon(1e-12));
        // |index| grows with the distance of the midpoint from the parent center
        for (const auto &a : subs)
            for (const auto &b : subs)
            {
                const double da = std::abs(a.center() - w.center()), db = std::abs(b.center() - w.center());
                if (da < db - 1e-6 * w.bandwidth())
                    CHECK(std::abs(a.index_from_center) < std::abs(b.index_from_center));
            }
    }
}

TEST_CASE("allocate_center_out - examples")
{
    const auto subs = partition(band, 3);
    const auto a = allocate_center_out(subs, demands({80, 40, 10}));
    CHECK(a.at(0).index_from_center == 0);
    CHECK(std::abs(a.at(1).index_from_center) == 1);
    CHECK(std::abs(a.at(2).index_from_center) == 1);
    // Ties in |index| go to the lower frequency first
    CHECK(a.at(1).index_from_center == -1);

    const auto single = allocate_center_out(partition(band, 5), demands({12}));
    CHECK(single.at(0).index_from_center == 0);

    const auto tie = allocate_center_out(subs, std::vector<LinkDemand>{{7, 50, {}}, {3, 50, {}}});
    CHECK(tie.at(3).index_from_center == 0);
    CHECK(tie.at(7).index_from_center == -1);
}

TEST_CASE("allocate_center_out - errors")
{
    const auto subs = partition(band, 2);
    try
    {
        (void)allocate_center_out(subs, demands({10, 20, 30, 40}));
        FAIL("expected allocation_error");
    }
    catch (const allocation_error &e)
    {
        // The two shortest links are left over
        CHECK(e.unassigned() == std::vector<int>{1, 0});
    }
    CHECK_THROWS_AS(allocate_center_out(subs, demands({0.0})), std::invalid_argument);
    CHECK_THROWS_AS(allocate_center_out(subs, std::vector<LinkDemand>{{1, 5, {}}, {1, 6, {}}}),
                    std::invalid_argument);
    CHECK(allocate_center_out(subs, {}).empty());
}

TEST_CASE("allocate_center_out - ordering property and determinism")
{
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> un(1, 30), ud(1, 12);
    for (int i = 0; i < 1000; ++i)
    {
        const int n = un(rng);
        const auto subs = partition(band, n);
        std::vector<LinkDemand> d;
        const int m = std::uniform_int_distribution<int>(1, n)(rng);
        for (int k = 0; k < m; ++k)
            d.push_back({100 + k, 10.0 * ud(rng), std::nullopt});
        std::shuffle(d.begin(), d.end(), rng);
        const auto a = allocate_center_out(subs, d);
        REQUIRE(a.size() == d.size());
        for (const auto &x : d)
            for (const auto &y : d)
                if (x.distance_m > y.distance_m)
                    CHECK(std::abs(a.at(x.link_id).index_from_center) <= std::abs(a.at(y.link_id).index_from_center));
        // No sub-window is used twice
        std::set<double> used;
        for (const auto &[id, s] : a)
            CHECK(used.insert(s.f_lo).second);
        auto reversed = d;
        std::reverse(reversed.begin(), reversed.end());
        const auto b = allocate_center_out(subs, reversed);
        for (const auto &[id, s] : a)
            CHECK(b.at(id).f_lo == s.f_lo);
    }
}

TEST_CASE("equal_power_split - examples and conservation")
{
    const auto subs = partition(band, 10);
    const auto two = equal_power_split(10.0, allocate_center_out(subs, demands({1, 2})));
    CHECK(two.at(0) == Approx(6.99).margin(5e-3));
    CHECK(equal_power_split(10.0, allocate_center_out(subs, demands({1}))).at(0) == 10.0);
    const auto ten = equal_power_split(10.0, allocate_center_out(subs, demands({1, 2, 3, 4, 5, 6, 7, 8, 9, 10})));
    for (const auto &[id, p] : ten)
        CHECK(p == Approx(0.0).margin(1e-12));
    CHECK_THROWS_AS(equal_power_split(10.0, {}), std::invalid_argument);

    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> up(-10.0, 40.0);
    std::uniform_int_distribution<int> un(1, 64);
    for (int i = 0; i < 1000; ++i)
    {
        const int n = un(rng);
        std::vector<double> d(static_cast<std::size_t>(n));
        std::iota(d.begin(), d.end(), 1.0);
        const double total = up(rng);
        const auto split = equal_power_split(total, allocate_center_out(partition(band, n), demands(d)));
        double linear = 0.0;
        for (const auto &[id, p] : split)
            linear += std::pow(10.0, p / 10.0);
        CHECK(std::abs(linear - std::pow(10.0, total / 10.0)) <= 1e-9 * std::pow(10.0, total / 10.0));
    }
}

TEST_CASE("allocation_report - plain and distance-aware")
{
    AllocationRequest req;
    req.window = {0.6e12, 0.7e12};
    req.n_sub = 3;
    req.demands = demands({100, 10, 1});
    const auto &table = synthetic_absorption_table();

    const auto plain = allocation_report(req, table);
    REQUIRE(plain.size() == 3);
    for (const auto &r : plain)
    {
        CHECK(r.usable_bandwidth_hz == Approx(r.sub.bandwidth()));
        CHECK(r.power_dbm == Approx(10.0 - 10.0 * std::log10(3.0)));
        CHECK(r.achievable_rate_bps > 0.0);
    }
    CHECK(plain[0].sub.index_from_center == 0);

    req.distance_aware = true;
    const auto aware = allocation_report(req, table);
    for (std::size_t i = 0; i < aware.size(); ++i)
    {
        CHECK(aware[i].usable_bandwidth_hz <= aware[i].sub.bandwidth() + 1.0);
        CHECK(aware[i].usable_bandwidth_hz >= 0.0);
    }

    std::stringstream ss;
    write_allocation_csv(ss, plain);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "link_id,distance_m,sub_f_lo_hz,sub_f_hi_hz,power_dbm,achievable_rate_bps");
    int rows = 0;
    for (std::string line; std::getline(ss, line);)
        ++rows;
    CHECK(rows == 3);
}

TEST_CASE("allocation_report - pluggable allocator")
{
    AllocationRequest req;
    req.window = {0.2e12, 0.3e12};
    req.n_sub = 2;
    req.demands = demands({50, 5});
    // Reverse policy: the shortest link takes the first sub-window
    const Allocator first_fit = [](std::span<const SubWindow> subs, std::span<const LinkDemand> d)
    {
        Assignment a;
        for (std::size_t i = 0; i < d.size(); ++i)
            a.emplace(d[i].link_id, subs[i]);
        return a;
    };
    const auto rows = allocation_report(req, synthetic_absorption_table(), first_fit);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].sub.f_lo == 0.2e12);
    CHECK(rows[1].sub.f_hi == 0.3e12);
}
