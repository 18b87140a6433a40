// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "iclab/error.hpp"
#include "iclab/harness.hpp"
#include "iclab/parallel.hpp"

using namespace iclab;

namespace {

SweepConfig small_config() {
    SweepConfig c = SweepConfig::benign_overfitting(30);
    c.n_eval_tasks = 50;
    c.record_timing = false;
    return c;
}

std::string to_csv(const std::vector<SweepRecord>& records) {
    std::ostringstream out;
    write_csv(records, out);
    return out.str();
}

}  // namespace

TEST_CASE("benign-overfitting defaults") {
    const SweepConfig c = SweepConfig::benign_overfitting(1000);
    const TaskParams p = c.params_at(c.values.front());
    CHECK(p.dim == 1000);
    CHECK(p.n_pretrain_tasks == 1000);
    CHECK(p.pretrain_radius == doctest::Approx(5.0 * std::sqrt(1000.0)));
    CHECK(p.pretrain_context == 40);
    CHECK(p.test_context == 20);
    CHECK(p.flip_prob == 0.1);
    CHECK(p.test_radius == doctest::Approx(std::pow(1000.0, 0.35)));
    CHECK(c.train.steps == 300);
    CHECK(c.train.step_size == 0.01);
    CHECK_FALSE(c.train.init.has_value());
    CHECK(c.train.loss == LossKind::logistic);
    CHECK(c.n_eval_tasks == 2500);
    CHECK(c.trainer == Trainer::gd);
}

TEST_CASE("dimension axis re-applies the ties") {
    SweepConfig c = small_config();
    c.axis = SweepAxis::dimension;
    const TaskParams p = c.params_at(64);
    CHECK(p.dim == 64);
    CHECK(p.n_pretrain_tasks == 64);
    CHECK(p.pretrain_radius == doctest::Approx(40.0));
    CHECK(p.test_radius == doctest::Approx(std::pow(64.0, 0.35)));
    c.axis = SweepAxis::batch_B;
    CHECK(c.params_at(7).n_pretrain_tasks == 7);
    c.axis = SweepAxis::rtilde;
    CHECK(c.params_at(2.5).test_radius == 2.5);
    c.axis = SweepAxis::context_M;
    CHECK(c.params_at(3).test_context == 3);
    c.axis = SweepAxis::noise_p;
    CHECK(c.params_at(0.25).flip_prob == 0.25);
}

TEST_CASE("sweep config validation") {
    SweepConfig c = small_config();
    c.values.clear();
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = small_config();
    c.seeds.clear();
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = small_config();
    c.axis = SweepAxis::batch_B;
    c.values = {2.5};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = small_config();
    c.axis = SweepAxis::noise_p;
    c.values = {0.7};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("single value, single seed, one task") {
    SweepConfig c = small_config();
    c.n_eval_tasks = 1;
    const auto records = run_sweep(c);
    REQUIRE(records.size() == 1);
    CHECK(records[0].n_tasks == 1);
    CHECK(records[0].wall_ms == 0.0);
    CHECK_FALSE(records[0].flagged);
}

TEST_CASE("one record per (value, seed), value-major") {
    SweepConfig c = small_config();
    c.values = {1.0, 3.0};
    c.seeds = {5, 6, 7};
    const auto records = run_sweep(c);
    REQUIRE(records.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(records[i].value == c.values[i / 3]);
        CHECK(records[i].seed == c.seeds[i % 3]);
        CHECK(records[i].axis == SweepAxis::rtilde);
    }
}

TEST_CASE("records do not depend on their neighbours or on thread count") {
    SweepConfig c = small_config();
    c.values = {1.0, 3.0};
    c.seeds = {5, 6};
    set_thread_count(1);
    const std::string one = to_csv(run_sweep(c));
    set_thread_count(8);
    const std::string eight = to_csv(run_sweep(c));
    set_thread_count(0);
    CHECK(one == eight);

    SweepConfig reversed = c;
    reversed.values = {3.0, 1.0};
    reversed.seeds = {6, 5};
    const auto a = run_sweep(c);
    const auto b = run_sweep(reversed);
    CHECK(a[0].test_acc_mean == b[3].test_acc_mean);
    CHECK(a[3].train_acc_mean == b[0].train_acc_mean);
}

TEST_CASE("max-margin trainer") {
    SweepConfig c = small_config();
    c.trainer = Trainer::max_margin;
    const auto records = run_sweep(c);
    REQUIRE(records.size() == 1);
    CHECK_FALSE(records[0].flagged);
    CHECK(records[0].train_acc_mean > 0.5);
}

TEST_CASE("diverged and non-converged points are flagged, sweep continues") {
    SweepConfig c = small_config();
    c.train.loss = LossKind::exponential;
    c.train.init = -1e4 * Matrix::identity(30);
    c.seeds = {1, 2};
    const auto records = run_sweep(c);
    REQUIRE(records.size() == 2);
    for (const auto& r : records) {
        CHECK(r.flagged);
        CHECK(std::isnan(r.test_acc_mean));
    }
    SweepConfig mm = small_config();
    mm.trainer = Trainer::max_margin;
    mm.max_sweeps = 1;
    mm.dual_tol = 1e-14;
    const auto mr = run_sweep(mm);
    CHECK(mr[0].flagged);
    CHECK_FALSE(std::isnan(mr[0].test_acc_mean));
}

TEST_CASE("rtilde sweep: train accuracy stays high while test accuracy rises") {
    SweepConfig c = SweepConfig::benign_overfitting(400);
    c.base.test_context = 5;
    c.values = {1.0, 3.0, 10.0};
    c.n_eval_tasks = 400;
    c.record_timing = false;
    const auto r = run_sweep(c);
    CHECK(r[0].test_acc_mean < r[1].test_acc_mean);
    CHECK(r[1].test_acc_mean < r[2].test_acc_mean);
    for (const auto& rec : r) CHECK(rec.train_acc_mean >= 0.9);
}

TEST_CASE("batch_B sweep: test accuracy increases with B") {
    SweepConfig c = SweepConfig::benign_overfitting(200);
    c.axis = SweepAxis::batch_B;
    c.rtilde_exponent = 0.45;
    c.base.test_context = 1;
    c.base.flip_prob = 0.0;
    c.values = {5, 200};
    c.seeds = {0, 1};
    c.n_eval_tasks = 1000;
    c.record_timing = false;
    const auto r = run_sweep(c);
    const double small = (r[0].test_acc_mean + r[1].test_acc_mean) / 2;
    const double large = (r[2].test_acc_mean + r[3].test_acc_mean) / 2;
    CHECK(large > small);
}

TEST_CASE("empty record list writes only the header") {
    CHECK(to_csv({}) == std::string(kSweepCsvHeader) + "\n");
    std::istringstream in(to_csv({}));
    CHECK(read_csv(in).empty());
}

TEST_CASE("values are written in shortest round-trip form") {
    SweepRecord r;
    r.value = 11.2;
    const std::string csv = to_csv({r});
    CHECK(csv.find("\nrtilde,11.2,0,") != std::string::npos);
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("CSV round trip of 100 records is bitwise stable") {
    std::vector<SweepRecord> records;
    Generator g = RngStream(42, 1).generator();
    const SweepAxis axes[] = {SweepAxis::rtilde, SweepAxis::batch_B, SweepAxis::dimension, SweepAxis::context_M,
                              SweepAxis::noise_p};
    for (int i = 0; i < 100; ++i) {
        SweepRecord r;
        r.axis = axes[i % 5];
        r.value = g.normal() * std::pow(10.0, i % 7 - 3);
        r.seed = g.next_u64();
        r.train_acc_mean = g.uniform();
        r.train_acc_se = g.uniform() * 1e-3;
        r.test_acc_mean = i == 7 ? std::numeric_limits<double>::quiet_NaN() : g.uniform();
        r.test_acc_se = g.uniform() / 3.0;
        r.full_mem_rate = g.uniform();
        r.n_tasks = g.next_u64() % 100000;
        r.wall_ms = g.uniform() * 1e5;
        records.push_back(r);
    }
    const std::string first = to_csv(records);
    std::istringstream in(first);
    const auto back = read_csv(in);
    REQUIRE(back.size() == 100);
    CHECK(to_csv(back) == first);
    for (std::size_t i = 0; i < 100; ++i) {
        CHECK(back[i].value == records[i].value);
        CHECK(back[i].seed == records[i].seed);
        CHECK(back[i].axis == records[i].axis);
    }
    CHECK(back[7].flagged);
}

TEST_CASE("malformed CSV names the line") {
    auto expect_line = [](const std::string& text, const std::string& needle) {
        std::istringstream in(text);
        try {
            (void)read_csv(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
        }
    };
    const std::string h = std::string(kSweepCsvHeader) + "\n";
    expect_line("", "line 1");
    expect_line("axis,value\n", "line 1");
    expect_line(h + "rtilde,1,0,1,0,1,0,1,10,0\nrtilde,1,0,1,0,1,0,1,10\n", "line 3");
    expect_line(h + "bogus,1,0,1,0,1,0,1,10,0\n", "line 2");
    expect_line(h + "rtilde,1,0,1,0,x,0,1,10,0\n", "line 2");
    expect_line(h + "rtilde,1,-3,1,0,1,0,1,10,0\n", "line 2");
}

TEST_CASE("axis and trainer names") {
    for (auto a : {SweepAxis::rtilde, SweepAxis::batch_B, SweepAxis::dimension, SweepAxis::context_M,
                   SweepAxis::noise_p})
        CHECK(parse_sweep_axis(to_string(a)) == a);
    CHECK(parse_trainer("max_margin") == Trainer::max_margin);
    CHECK_THROWS_AS(parse_trainer("sgd"), ParseError);
}
