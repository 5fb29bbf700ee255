#pragma once

// Trace and throughput analyses over the simulated agent:
//   run_trace  — P0..P6 interval report for one streaming sensor
//   run_sweep  — achieved throughput and drop counts across the ODR ladder
//   max_sustainable_odr — ladder ceiling from the analytic busy span
//
// Interval interpretation (the measured traces label these but do not
// define P2/P3; here P2 is the I2C transaction span and P3 the
// serialization span):
//   P0 interrupt period        P1 EXTI-to-stream dispatch
//   P2 bus transaction         P3 serialization
//   P4 stream-to-UART handoff  uart span: TX kick busy time
//   P5 idle window             P6 stream-to-EXTI round trip (task mode)

#include <cstdint>
#include <string>
#include <vector>

#include "vdl/harness.hpp"

namespace vdl::bench {

struct BenchConfig {
    sim::TimingParams params;
    std::uint32_t odr_hz = 7680;
    std::uint64_t skew_num = 7477;
    std::uint64_t skew_den = 7680;
    std::uint64_t seed = 1;
};

struct TraceReport {
    // all intervals in integer nanoseconds, averaged over measured cycles
    // (with a deterministic config every cycle is identical)
    std::uint64_t p0_ns = 0;
    std::uint64_t p1_ns = 0;
    std::uint64_t p2_ns = 0;
    std::uint64_t p3_ns = 0;
    std::uint64_t p4_ns = 0;
    std::uint64_t uart_span_ns = 0;
    std::uint64_t p5_ns = 0;
    std::uint64_t p6_ns = 0;
    std::uint64_t busy_ns = 0;
    std::size_t cycles = 0;
    bool closure_ok = false;          // P0 == P1+P2+P3+P4+uart+P5(+P6) per cycle
    std::uint64_t closure_max_dev = 0;  // worst per-cycle deviation, ns

    double us(std::uint64_t ns) const { return static_cast<double>(ns) / 1000.0; }
};

inline harness::HarnessConfig make_harness_config(agent::AgentMode mode,
                                                  const BenchConfig& cfg) {
    harness::HarnessConfig h;
    h.mode = mode;
    h.params = cfg.params;
    h.sensor_seed = cfg.seed;
    h.skew_num = cfg.skew_num;
    h.skew_den = cfg.skew_den;
    return h;
}

inline std::string enable_acc_command(std::uint32_t odr_hz) {
    return "{\"set_property\":{\"sensor\":\"acc\",\"enable\":true,\"odr\":" +
           std::to_string(odr_hz) + "}}";
}

/// Run n_cycles streaming cycles of the accelerometer channel and report
/// the measured intervals.
inline TraceReport run_trace(agent::AgentMode mode, const BenchConfig& cfg,
                             std::size_t n_cycles) {
    if (n_cycles < 1) {
        throw LogicError("run_trace: n_cycles must be >= 1");
    }
    harness::SimHarness world(make_harness_config(mode, cfg));
    world.agent().enable_trace(n_cycles + 2);

    if (auto r = world.run_command(enable_acc_command(cfg.odr_hz)); !r.ok()) {
        throw LogicError("run_trace: set_property failed");
    }
    if (auto r = world.run_command("{\"start_log\":{}}"); !r.ok()) {
        throw LogicError("run_trace: start_log failed");
    }
    world.wait_periods(n_cycles + 2);
    (void)world.run_command("{\"stop_log\":{}}");

    const auto& traces = world.agent().traces();
    TraceReport rep;
    // P0 and P5 need the next cycle's interrupt, so the last trace row only
    // closes the preceding ones.
    const std::size_t usable = traces.size() > n_cycles ? n_cycles : traces.size() - 1;
    if (traces.size() < 2) {
        return rep;
    }
    rep.closure_ok = true;
    std::uint64_t s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, su = 0, s5 = 0, s6 = 0, sb = 0;
    for (std::size_t i = 0; i < usable; ++i) {
        const auto& c = traces[i];
        const auto& next = traces[i + 1];
        const std::uint64_t p0 = next.t_drdy - c.t_drdy;
        const std::uint64_t p1 = c.t_wake - c.t_drdy;
        const std::uint64_t p2 = c.t_i2c_done - c.t_wake;
        const std::uint64_t p3 = c.t_ser_done - c.t_i2c_done;
        const std::uint64_t p4 = c.t_kick - c.t_ser_done;
        const std::uint64_t uart = c.uart_span_ns;
        const std::uint64_t p6 = c.t_busy_end - (c.t_kick + uart);
        const std::uint64_t p5 = next.t_drdy - c.t_busy_end;
        const std::uint64_t sum = p1 + p2 + p3 + p4 + uart + p6 + p5;
        const std::uint64_t dev = sum > p0 ? sum - p0 : p0 - sum;
        if (dev > rep.closure_max_dev) {
            rep.closure_max_dev = dev;
        }
        if (dev != 0) {
            rep.closure_ok = false;
        }
        s0 += p0;
        s1 += p1;
        s2 += p2;
        s3 += p3;
        s4 += p4;
        su += uart;
        s5 += p5;
        s6 += p6;
        sb += c.t_busy_end - c.t_drdy;
    }
    rep.cycles = usable;
    rep.p0_ns = s0 / usable;
    rep.p1_ns = s1 / usable;
    rep.p2_ns = s2 / usable;
    rep.p3_ns = s3 / usable;
    rep.p4_ns = s4 / usable;
    rep.uart_span_ns = su / usable;
    rep.p5_ns = s5 / usable;
    rep.p6_ns = s6 / usable;
    rep.busy_ns = sb / usable;
    return rep;
}

/// Analytic per-cycle busy span for a single-sensor cycle.
inline std::uint64_t busy_span_ns(agent::AgentMode mode, const sim::TimingParams& base) {
    sim::TimingParams p = base;
    p.exti_dispatch_stages = (mode == agent::AgentMode::FsmLoop) ? 1 : 2;
    const std::uint64_t resolve = p.drdy_via_status_read ? p.i2c_read_ns : 0;
    return sim::exti_dispatch_ns(p) + resolve + p.i2c_read_ns + p.serialize_ns +
           p.logging_overhead_ns + sim::uart_transition_total_ns(p) + p.uart_kick_ns +
           sim::exti_return_ns(p);
}

struct SweepPoint {
    std::uint32_t target_hz = 0;
    double achieved_hz = 0.0;
    std::uint64_t drops = 0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
};

/// Stream cycles_per_odr interrupt periods at each requested ODR and
/// measure achieved sample throughput and overrun drops.
inline SweepResult run_sweep(agent::AgentMode mode, const BenchConfig& cfg,
                             const std::vector<std::uint32_t>& odr_list,
                             std::uint64_t cycles_per_odr = 2000) {
    SweepResult result;
    for (std::uint32_t odr : odr_list) {
        if (!data::odr_in_ladder(odr)) {
            throw LogicError("run_sweep: ODR not in ladder");
        }
        harness::SimHarness world(make_harness_config(mode, cfg));
        if (auto r = world.run_command(enable_acc_command(odr)); !r.ok()) {
            throw LogicError("run_sweep: set_property failed");
        }
        if (auto r = world.run_command("{\"start_log\":{}}"); !r.ok()) {
            throw LogicError("run_sweep: start_log failed");
        }
        auto& acc = world.sensors()[0];
        const std::uint64_t reads_before = acc.samples_read();
        const sim::SimTime t0 = world.kernel().now();
        world.wait_periods(cycles_per_odr);
        const sim::SimTime t1 = world.kernel().now();
        const std::uint64_t reads = acc.samples_read() - reads_before;
        SweepPoint pt;
        pt.target_hz = odr;
        pt.drops = acc.overruns();
        pt.achieved_hz = t1 > t0 ? static_cast<double>(reads) * 1e9 /
                                       static_cast<double>(t1 - t0)
                                 : 0.0;
        (void)world.run_command("{\"stop_log\":{}}");
        result.points.push_back(pt);
    }
    return result;
}

/// Largest ladder ODR whose achieved interrupt period covers the analytic
/// busy span. A zero busy span sustains the ladder maximum.
inline std::uint32_t max_sustainable_odr(const sim::TimingParams& params, agent::AgentMode mode,
                                         std::uint64_t skew_num = 7477,
                                         std::uint64_t skew_den = 7680) {
    const std::uint64_t busy = busy_span_ns(mode, params);
    std::uint32_t best = 0;
    for (std::uint32_t odr : data::kOdrLadder) {
        const std::uint64_t denom = static_cast<std::uint64_t>(odr) * skew_num;
        const unsigned __int128 num =
            static_cast<unsigned __int128>(1'000'000'000ULL) * skew_den;
        const std::uint64_t period = static_cast<std::uint64_t>((num + denom / 2) / denom);
        if (period >= busy) {
            best = odr;
        }
    }
    return best != 0 ? best : data::kOdrLadder[0];
}

}  // namespace vdl::bench
