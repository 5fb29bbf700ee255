// Trace/sweep analysis tests.
//
// Oracles frozen here (hand-derived from the timing parameters, then
// locked):
//  - single-stage preset: P0 133750, P1 1958, P2 112000, P3 2375, P4 2542,
//    UART kick 1000, P5 13875, busy 119875 ns
//  - two-stage preset: P1 3458, P4 4417, P6 4000, P5 6500, busy 127250 ns
//  - legacy parameters: busy exactly 140000 ns, which overruns a 133750 ns
//    interrupt period but not a 267500 ns one
//  - ladder ceilings for several busy spans, computed by hand

#include <catch2/catch_amalgamated.hpp>

#include "vdl/bench.hpp"

using namespace vdl;
using namespace vdl::bench;
using agent::AgentMode;

namespace {

// Single-stage (flag-polling loop) measurement preset.
BenchConfig fsm_preset() {
    BenchConfig cfg;
    cfg.params.exti_overhead_ns = 258;
    cfg.params.uart_transition_ns = 2542;
    cfg.skew_num = 625;  // 7680 Hz * 625/642 -> exactly 133750 ns
    cfg.skew_den = 642;
    cfg.odr_hz = 7680;
    return cfg;
}

// Two-stage (task-based) measurement preset.
BenchConfig tasks_preset() {
    BenchConfig cfg = fsm_preset();
    cfg.params.exti_overhead_ns = 58;
    cfg.params.uart_transition_ns = 2717;
    cfg.params.exti_return_overhead_ns = 600;
    return cfg;
}

// Parameters before the bus/UART optimizations: slower I2C transaction and
// a DRDY status read plus a longer TX kick.
BenchConfig legacy_preset() {
    BenchConfig cfg = fsm_preset();
    cfg.params.i2c_read_ns = 122'000;
    cfg.params.uart_kick_ns = 11'125;
    cfg.params.drdy_via_status_read = false;
    return cfg;
}

}  // namespace

TEST_CASE("single-stage trace reproduces the frozen interval set exactly") {
    auto rep = run_trace(AgentMode::FsmLoop, fsm_preset(), 50);
    REQUIRE(rep.cycles == 50);
    REQUIRE(rep.p0_ns == 133'750);
    REQUIRE(rep.p1_ns == 1'958);
    REQUIRE(rep.p2_ns == 112'000);
    REQUIRE(rep.p3_ns == 2'375);
    REQUIRE(rep.p4_ns == 2'542);
    REQUIRE(rep.uart_span_ns == 1'000);
    REQUIRE(rep.p5_ns == 13'875);
    REQUIRE(rep.p6_ns == 0);
    REQUIRE(rep.busy_ns == 119'875);
    REQUIRE(rep.closure_ok);
    REQUIRE(rep.closure_max_dev == 0);
}

TEST_CASE("two-stage trace reproduces the frozen interval set exactly") {
    auto rep = run_trace(AgentMode::EventTasks, tasks_preset(), 50);
    REQUIRE(rep.cycles == 50);
    REQUIRE(rep.p0_ns == 133'750);
    REQUIRE(rep.p1_ns == 3'458);
    REQUIRE(rep.p2_ns == 112'000);
    REQUIRE(rep.p3_ns == 2'375);
    REQUIRE(rep.p4_ns == 4'417);
    REQUIRE(rep.uart_span_ns == 1'000);
    REQUIRE(rep.p6_ns == 4'000);
    REQUIRE(rep.p5_ns == 6'500);
    REQUIRE(rep.busy_ns == 127'250);
    REQUIRE(rep.closure_ok);
}

TEST_CASE("interval closure holds for arbitrary parameter sets") {
    BenchConfig cfg;
    cfg.params.cpu_clock_hz = 84'000'000;
    cfg.params.i2c_read_ns = 97'531;
    cfg.params.serialize_ns = 3'311;
    cfg.params.uart_kick_ns = 777;
    cfg.params.logging_overhead_ns = 1'234;
    cfg.odr_hz = 1920;
    for (AgentMode mode : {AgentMode::FsmLoop, AgentMode::EventTasks}) {
        auto rep = run_trace(mode, cfg, 25);
        CAPTURE(static_cast<int>(mode));
        REQUIRE(rep.cycles == 25);
        REQUIRE(rep.closure_ok);
        REQUIRE(rep.closure_max_dev == 0);
        REQUIRE(rep.busy_ns == busy_span_ns(mode, cfg.params));
    }
}

TEST_CASE("the two-stage architecture is strictly busier per cycle") {
    const auto fsm = busy_span_ns(AgentMode::FsmLoop, fsm_preset().params);
    const auto tasks = busy_span_ns(AgentMode::EventTasks, tasks_preset().params);
    REQUIRE(fsm == 119'875);
    REQUIRE(tasks == 127'250);
    REQUIRE(tasks > fsm);
    // Same parameter set, only the dispatch depth differs: still ordered.
    const auto same_params_tasks = busy_span_ns(AgentMode::EventTasks, fsm_preset().params);
    REQUIRE(same_params_tasks > fsm);
}

TEST_CASE("legacy parameters overrun the top rate but not half rate") {
    const auto cfg = legacy_preset();
    REQUIRE(busy_span_ns(AgentMode::FsmLoop, cfg.params) == 140'000);

    auto sweep = run_sweep(AgentMode::FsmLoop, cfg, {3840, 7680}, 2'000);
    REQUIRE(sweep.points.size() == 2);
    const auto& half = sweep.points[0];
    const auto& top = sweep.points[1];
    REQUIRE(half.drops == 0);
    REQUIRE(top.drops > 0);
    // Saturated throughput approaches 1 / busy ~= 7142.9 Hz.
    REQUIRE(top.achieved_hz > 7'000.0);
    REQUIRE(top.achieved_hz < 7'200.0);
}

TEST_CASE("optimized parameters sustain the full ladder with zero drops") {
    auto sweep = run_sweep(AgentMode::FsmLoop, fsm_preset(),
                           {15, 120, 960, 3840, 7680}, 500);
    for (const auto& pt : sweep.points) {
        CAPTURE(pt.target_hz);
        REQUIRE(pt.drops == 0);
    }
}

TEST_CASE("achieved throughput is monotone in the target rate until saturation") {
    auto sweep = run_sweep(AgentMode::FsmLoop, legacy_preset(),
                           {15, 30, 60, 120, 240, 480, 960, 1920, 3840, 7680}, 1'000);
    REQUIRE(sweep.points.size() == 10);
    for (std::size_t i = 1; i < sweep.points.size(); ++i) {
        REQUIRE(sweep.points[i].achieved_hz >= sweep.points[i - 1].achieved_hz * 0.999);
    }
}

TEST_CASE("a large per-sample logging overhead caps throughput at a plateau") {
    // busy = 119875 + 371767 = 491642 ns -> ceiling ~= 2034 Hz regardless of
    // the configured rate above it.
    BenchConfig cfg = fsm_preset();
    cfg.params.logging_overhead_ns = 371'767;
    REQUIRE(busy_span_ns(AgentMode::FsmLoop, cfg.params) == 491'642);
    auto sweep = run_sweep(AgentMode::FsmLoop, cfg, {3840, 7680}, 3'000);
    for (const auto& pt : sweep.points) {
        CAPTURE(pt.target_hz);
        REQUIRE(pt.achieved_hz > 2'000.0);
        REQUIRE(pt.achieved_hz < 2'060.0);
        REQUIRE(pt.drops > 0);
    }
}

TEST_CASE("ladder ceiling from the analytic busy span") {
    // busy 119875 ns vs the default-skew 7680 Hz period of 133743 ns.
    REQUIRE(max_sustainable_odr(fsm_preset().params, AgentMode::FsmLoop) == 7'680);
    // busy 127250 ns still fits.
    REQUIRE(max_sustainable_odr(tasks_preset().params, AgentMode::EventTasks) == 7'680);
    // busy 140000 ns does not fit 133743 ns; the ceiling falls one step.
    REQUIRE(max_sustainable_odr(legacy_preset().params, AgentMode::FsmLoop) == 3'840);

    // A 500 us busy span with no clock skew supports at most 1920 Hz
    // (520833 ns period); 3840 Hz (260417 ns) is too fast.
    sim::TimingParams p;
    p.i2c_read_ns = 500'000 - busy_span_ns(AgentMode::FsmLoop, sim::TimingParams{}) +
                    sim::TimingParams{}.i2c_read_ns;
    REQUIRE(busy_span_ns(AgentMode::FsmLoop, p) == 500'000);
    REQUIRE(max_sustainable_odr(p, AgentMode::FsmLoop, 1, 1) == 1'920);

    // A zero busy span sustains the ladder maximum.
    sim::TimingParams zero;
    zero.task_switch_cycles = 0;
    zero.i2c_read_ns = 0;
    zero.exti_overhead_ns = 0;
    zero.serialize_ns = 0;
    zero.uart_transition_ns = 0;
    zero.uart_kick_ns = 0;
    REQUIRE(busy_span_ns(AgentMode::FsmLoop, zero) == 0);
    REQUIRE(max_sustainable_odr(zero, AgentMode::FsmLoop) == 7'680);

    // An absurd busy span falls back to the ladder minimum.
    sim::TimingParams slow;
    slow.i2c_read_ns = 1'000'000'000;
    REQUIRE(max_sustainable_odr(slow, AgentMode::FsmLoop) == 15);
}

TEST_CASE("trace and sweep argument validation") {
    REQUIRE_THROWS_AS(run_trace(AgentMode::FsmLoop, fsm_preset(), 0), LogicError);
    REQUIRE_THROWS_AS(run_sweep(AgentMode::FsmLoop, fsm_preset(), {1000}, 10), LogicError);
}

TEST_CASE("default-skew trace period is 133743 ns") {
    BenchConfig cfg = fsm_preset();
    cfg.skew_num = 7477;
    cfg.skew_den = 7680;
    auto rep = run_trace(AgentMode::FsmLoop, cfg, 30);
    REQUIRE(rep.p0_ns == 133'743);
    REQUIRE(rep.closure_ok);
}
