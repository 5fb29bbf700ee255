#pragma once

// The sensor-agent firmware logic, runnable in two architectures over the
// same event kernel:
//   FsmLoop    — flag-polling state machine in a main loop (one dispatch
//                stage between interrupt and streaming work)
//   EventTasks — EXTI handler task signalling a streaming task (two-stage
//                dispatch, plus an executor round trip back to the EXTI
//                wait at the end of each cycle)
//
// The functional behaviour is identical in both modes; only the latency
// bookkeeping differs. The streaming path performs no allocation: frames
// are built in fixed buffers and handed to the UART link.

#include <array>
#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "vdl/data_layer.hpp"
#include "vdl/protocol.hpp"
#include "vdl/sensor.hpp"
#include "vdl/sim.hpp"

namespace vdl::agent {

enum class AgentMode { FsmLoop, EventTasks };

enum class FsmState : std::uint8_t { Idle, Configured, Streaming, Stopping };

enum class AgentError {
    UnknownSensor,
    InvalidTransition,
    ConfigRejected,
    NotRunning,
};

inline const char* to_string(AgentError e) {
    switch (e) {
        case AgentError::UnknownSensor: return "UnknownSensor";
        case AgentError::InvalidTransition: return "InvalidTransition";
        case AgentError::ConfigRejected: return "ConfigRejected";
        case AgentError::NotRunning: return "NotRunning";
    }
    return "?";
}

// TimerFire tags used by the agent's continuations.
inline constexpr std::uint64_t kTimerSerializeDone = 1;
inline constexpr std::uint64_t kTimerUartKick = 2;
inline constexpr std::uint64_t kTimerCycleEnd = 3;
inline constexpr std::uint64_t kTimerHandleCommand = 4;

/// Per-cycle phase timestamps, recorded while tracing. All in ns.
struct CycleTrace {
    sim::SimTime t_drdy = 0;      // interrupt that opened the cycle
    sim::SimTime t_wake = 0;      // streaming work begins
    sim::SimTime t_i2c_done = 0;  // bus transaction complete
    sim::SimTime t_ser_done = 0;  // sample serialized, frame built
    sim::SimTime t_kick = 0;      // UART handoff begins
    std::uint64_t uart_span_ns = 0;
    sim::SimTime t_busy_end = 0;  // cycle work complete (after P6 in task mode)
};

class Agent {
public:
    Agent(AgentMode mode, sim::Kernel& kernel, std::vector<sensor::VirtualSensor>& sensors,
          sim::UartLink& tx_link, const data::DeviceModel& model, sim::TimingParams params)
        : mode_(mode),
          kernel_(kernel),
          sensors_(sensors),
          tx_link_(tx_link),
          model_(model),
          params_(params),
          session_(proto::Role::Slave) {
        params_.exti_dispatch_stages = (mode == AgentMode::FsmLoop) ? 1 : 2;
        for (auto& f : drdy_flags_) {
            f.store(false, std::memory_order_relaxed);
        }
    }

    Agent(const Agent&) = delete;
    Agent& operator=(const Agent&) = delete;

    AgentMode mode() const { return mode_; }
    FsmState state() const { return state_; }
    const sim::TimingParams& params() const { return params_; }
    proto::TransportSession& session() { return session_; }
    bool stop_requested() const { return stop_requested_.load(std::memory_order_relaxed); }

    void enable_trace(std::size_t reserve_cycles) {
        tracing_ = true;
        traces_.reserve(reserve_cycles);
    }
    const std::vector<CycleTrace>& traces() const { return traces_; }

    std::uint64_t frames_emitted() const { return frames_emitted_; }
    std::uint64_t flag_sets() const { return flag_sets_; }
    std::uint64_t flag_clears() const { return flag_clears_; }

    /// Data-ready interrupt from sensor `sensor_id`. Sets the sensor's flag
    /// and, when the agent is streaming and no cycle is in flight, starts
    /// the dispatch chain.
    Expected<std::monostate, AgentError> on_drdy_interrupt(std::uint32_t sensor_id,
                                                           sim::SimTime now) {
        if (sensor_id >= sensors_.size()) {
            return AgentError::UnknownSensor;
        }
        drdy_flags_[sensor_id].store(true, std::memory_order_relaxed);
        ++flag_sets_;
        if (state_ == FsmState::Streaming && !cycle_active_) {
            start_cycle(now);
        }
        return std::monostate{};
    }

    /// Kernel event entry point for the agent's own continuations.
    void on_event(const sim::SimEvent& ev) {
        switch (ev.kind) {
            case sim::EventKind::I2cDone:
                on_i2c_done(ev);
                break;
            case sim::EventKind::TaskWake:
                on_stream_wake(ev.at);
                break;
            case sim::EventKind::TimerFire:
                if (ev.a == kTimerSerializeDone) {
                    on_serialize_done(ev);
                } else if (ev.a == kTimerUartKick) {
                    on_uart_kick(ev);
                } else if (ev.a == kTimerCycleEnd) {
                    on_cycle_end(ev.at);
                } else if (ev.a == kTimerHandleCommand) {
                    process_pending_command(ev.at);
                }
                break;
            default:
                break;
        }
    }

    /// Inbound command bytes from the controller link; frames are
    /// reassembled in a fixed buffer and handled between streaming cycles.
    void on_rx_bytes(std::span<const std::uint8_t> bytes, sim::SimTime now) {
        for (std::uint8_t b : bytes) {
            if (rx_len_ < rx_buf_.size()) {
                rx_buf_[rx_len_++] = b;
            }
        }
        const std::size_t want = proto::frame_wire_size({rx_buf_.data(), rx_len_});
        if (want == 0 || rx_len_ < want) {
            return;
        }
        auto view = proto::decode_frame_view({rx_buf_.data(), want});
        if (view.ok() && view->packet_type == proto::PacketType::Command) {
            pending_cmd_json_.assign(std::string_view(
                reinterpret_cast<const char*>(view->payload.data()), view->payload.size()));
            has_pending_cmd_ = true;
            // commands run between streaming cycles, never preempting one
            const sim::SimTime when = cycle_active_ ? busy_until_ : now;
            (void)kernel_.schedule(std::max(when, now), sim::EventKind::TimerFire,
                                   kTimerHandleCommand);
        }
        // shift out the consumed frame (command traffic is low-rate)
        std::memmove(rx_buf_.data(), rx_buf_.data() + want, rx_len_ - want);
        rx_len_ -= want;
    }

    /// Apply one parsed command. Returns the response payload length
    /// written into `out` on success.
    Expected<std::size_t, AgentError> handle_command(const data::Command& cmd,
                                                     std::span<char> out, sim::SimTime now) {
        switch (cmd.kind) {
            case data::CommandKind::GetStatus: {
                auto n = data::serialize_status(build_status(), out);
                if (!n.ok()) {
                    return AgentError::ConfigRejected;
                }
                return *n;
            }
            case data::CommandKind::SetProperty: {
                if (state_ == FsmState::Streaming) {
                    return AgentError::ConfigRejected;
                }
                const int idx = model_.sensor_index(cmd.sensor_name.view());
                if (idx < 0 || static_cast<std::size_t>(idx) >= sensors_.size()) {
                    return AgentError::UnknownSensor;
                }
                auto& cfg = sensors_[static_cast<std::size_t>(idx)].config();
                if (cmd.has_odr) {
                    cfg.odr_hz = cmd.odr_hz;
                }
                if (cmd.has_full_scale) {
                    cfg.full_scale = cmd.full_scale;
                }
                if (cmd.has_enable) {
                    cfg.enabled = cmd.enable;
                    if (cfg.enabled && cfg.odr_hz == 0) {
                        cfg.odr_hz = model_.sensors[static_cast<std::size_t>(idx)]
                                         .supported_odrs[0];
                    }
                }
                state_ = any_sensor_enabled() ? FsmState::Configured : FsmState::Idle;
                return write_ok(out);
            }
            case data::CommandKind::StartLog: {
                if (state_ == FsmState::Streaming || state_ == FsmState::Stopping ||
                    !any_sensor_enabled()) {
                    return AgentError::InvalidTransition;
                }
                state_ = FsmState::Streaming;
                (void)session_.slave_enter_streaming();
                for (auto& s : sensors_) {
                    if (s.config().enabled) {
                        s.start_clock(now);
                        (void)s.tick_drdy(kernel_, now);
                    }
                }
                return write_ok(out);
            }
            case data::CommandKind::StopLog: {
                if (state_ != FsmState::Streaming) {
                    return AgentError::InvalidTransition;
                }
                stop_requested_.store(true, std::memory_order_relaxed);
                if (!cycle_active_) {
                    finish_stop();
                }
                return write_ok(out);
            }
        }
        return AgentError::InvalidTransition;
    }

private:
    // ---- streaming cycle continuations -----------------------------------

    void start_cycle(sim::SimTime drdy_time) {
        cycle_active_ = true;
        current_.t_drdy = drdy_time;
        const sim::SimTime base = std::max(drdy_time, busy_until_);
        (void)kernel_.schedule(base + sim::exti_dispatch_ns(params_), sim::EventKind::TaskWake,
                               /*task=*/0);
    }

    void on_stream_wake(sim::SimTime now) {
        current_.t_wake = now;
        service_queue_.clear();
        for (std::uint32_t i = 0; i < sensors_.size(); ++i) {
            if (drdy_flags_[i].load(std::memory_order_relaxed)) {
                service_queue_.push_back(i);
            }
        }
        if (service_queue_.empty()) {
            end_cycle(now);
            return;
        }
        auto [ids, resolve_cost] = sensor::resolve_drdy_source(service_queue_, params_);
        service_pos_ = 0;
        start_i2c(ids[0], now + resolve_cost);
    }

    void start_i2c(std::uint32_t sensor_id, sim::SimTime now) {
        auto& s = sensors_[sensor_id];
        drdy_flags_[sensor_id].store(false, std::memory_order_relaxed);
        ++flag_clears_;
        auto read = s.i2c_read_sample(now, params_);
        if (!read.ok()) {
            // flag raised without data (should not happen in the simulation)
            advance_service(now);
            return;
        }
        pending_sample_ = read->first;
        (void)kernel_.schedule(read->second, sim::EventKind::I2cDone, sensor_id);
    }

    void on_i2c_done(const sim::SimEvent& ev) {
        current_.t_i2c_done = ev.at;
        (void)kernel_.schedule(ev.at + params_.serialize_ns + params_.logging_overhead_ns,
                               sim::EventKind::TimerFire, kTimerSerializeDone, ev.a);
    }

    void on_serialize_done(const sim::SimEvent& ev) {
        current_.t_ser_done = ev.at;
        const std::uint32_t sensor_id = static_cast<std::uint32_t>(ev.b);
        std::uint8_t sample_buf[data::kInertialSampleSize];
        auto n = data::encode_sample(pending_sample_, sample_buf);
        if (n.ok()) {
            const std::uint8_t channel = sensors_[sensor_id].descriptor().channel_id;
            auto wire = session_.slave_emit_data_into(
                channel, std::span<const std::uint8_t>(sample_buf, *n), frame_buf_);
            frame_len_ = wire.ok() ? *wire : 0;
        } else {
            frame_len_ = 0;
        }
        (void)kernel_.schedule(ev.at + sim::uart_transition_total_ns(params_),
                               sim::EventKind::TimerFire, kTimerUartKick, ev.b);
    }

    void on_uart_kick(const sim::SimEvent& ev) {
        current_.t_kick = ev.at;
        current_.uart_span_ns = params_.uart_kick_ns;
        if (frame_len_ > 0) {
            auto done = tx_link_.transmit({frame_buf_.data(), frame_len_}, ev.at, params_);
            if (done.ok()) {
                (void)kernel_.schedule(*done, sim::EventKind::UartTxDone, /*link=*/0);
            }
            ++frames_emitted_;
        }
        advance_service(ev.at + params_.uart_kick_ns);
    }

    void advance_service(sim::SimTime now) {
        ++service_pos_;
        if (service_pos_ < service_queue_.size()) {
            start_i2c(service_queue_[service_pos_], now);
            return;
        }
        // EventTasks pays the executor round trip back to the EXTI wait
        const std::uint64_t tail = sim::exti_return_ns(params_);
        if (tail > 0) {
            (void)kernel_.schedule(now + tail, sim::EventKind::TimerFire, kTimerCycleEnd);
        } else {
            end_cycle(now);
        }
    }

    void on_cycle_end(sim::SimTime now) { end_cycle(now); }

    void end_cycle(sim::SimTime now) {
        current_.t_busy_end = now;
        busy_until_ = now;
        cycle_active_ = false;
        if (tracing_ && traces_.size() < traces_.capacity()) {
            traces_.push_back(current_);
        }
        current_ = CycleTrace{};

        if (stop_requested_.load(std::memory_order_relaxed)) {
            finish_stop();
            return;
        }
        // service any flags raised while this cycle was running
        if (state_ == FsmState::Streaming) {
            for (std::uint32_t i = 0; i < sensors_.size(); ++i) {
                if (drdy_flags_[i].load(std::memory_order_relaxed)) {
                    start_cycle(now);
                    break;
                }
            }
        }
    }

    void finish_stop() {
        state_ = FsmState::Stopping;
        stop_requested_.store(false, std::memory_order_relaxed);
        session_.slave_leave_streaming();
        for (std::uint32_t i = 0; i < sensors_.size(); ++i) {
            drdy_flags_[i].store(false, std::memory_order_relaxed);
        }
        state_ = any_sensor_enabled() ? FsmState::Configured : FsmState::Idle;
        if (stop_response_deferred_) {
            stop_response_deferred_ = false;
            send_response("{\"ok\":true}");
        }
    }

    // ---- command handling -------------------------------------------------

    void process_pending_command(sim::SimTime now) {
        if (!has_pending_cmd_) {
            return;
        }
        has_pending_cmd_ = false;
        auto parsed = data::parse_command(pending_cmd_json_.view(), model_);
        if (!parsed.ok()) {
            send_error_response(data::to_string(parsed.error()));
            return;
        }
        const bool was_streaming_stop =
            parsed->kind == data::CommandKind::StopLog && state_ == FsmState::Streaming &&
            cycle_active_;
        std::array<char, data::kStatusBufCap> resp;
        auto n = handle_command(*parsed, resp, now);
        if (!n.ok()) {
            send_error_response(to_string(n.error()));
            return;
        }
        if (was_streaming_stop) {
            // acknowledged only after the in-flight cycle drains
            stop_response_deferred_ = true;
            return;
        }
        send_response(std::string_view(resp.data(), *n));
    }

    void send_response(std::string_view payload) {
        // Responses (notably status reports) can exceed the streaming frame
        // buffer; they get their own buffer sized for the status capacity.
        std::array<std::uint8_t, data::kStatusBufCap + proto::kHeaderSize + proto::kCrcSize>
            wire_buf;
        auto wire = proto::encode_frame_into(
            proto::PacketType::Response, 0,
            {reinterpret_cast<const std::uint8_t*>(payload.data()), payload.size()}, wire_buf);
        if (wire.ok()) {
            auto done = tx_link_.transmit({wire_buf.data(), *wire}, kernel_.now(), params_);
            if (done.ok()) {
                (void)kernel_.schedule(*done, sim::EventKind::UartTxDone, /*link=*/0);
            }
        }
    }

    void send_error_response(std::string_view what) {
        std::array<char, 96> buf;
        json::Writer w(buf);
        w.raw("{\"error\":");
        w.string(what);
        w.raw("}");
        if (!w.overflow()) {
            std::array<std::uint8_t, 128> wire_buf;
            auto wire = proto::encode_frame_into(
                proto::PacketType::Error, 0,
                {reinterpret_cast<const std::uint8_t*>(buf.data()), w.size()}, wire_buf);
            if (wire.ok()) {
                auto done =
                    tx_link_.transmit({wire_buf.data(), *wire}, kernel_.now(), params_);
                if (done.ok()) {
                    (void)kernel_.schedule(*done, sim::EventKind::UartTxDone, /*link=*/0);
                }
            }
        }
    }

    static Expected<std::size_t, AgentError> write_ok(std::span<char> out) {
        constexpr std::string_view kOk = "{\"ok\":true}";
        if (out.size() < kOk.size()) {
            return AgentError::ConfigRejected;
        }
        std::memcpy(out.data(), kOk.data(), kOk.size());
        return kOk.size();
    }

    data::DeviceStatus build_status() const {
        data::DeviceStatus st;
        st.device_name = model_.device_name;
        st.firmware_version = model_.firmware_version;
        st.streaming = (state_ == FsmState::Streaming);
        for (std::size_t i = 0; i < sensors_.size(); ++i) {
            data::SensorStatusEntry e;
            e.name = sensors_[i].descriptor().name;
            e.config = sensors_[i].config();
            st.sensors.push_back(e);
        }
        return st;
    }

    bool any_sensor_enabled() const {
        for (const auto& s : sensors_) {
            if (s.config().enabled) {
                return true;
            }
        }
        return false;
    }

    AgentMode mode_;
    sim::Kernel& kernel_;
    std::vector<sensor::VirtualSensor>& sensors_;
    sim::UartLink& tx_link_;
    data::DeviceModel model_;
    sim::TimingParams params_;
    proto::TransportSession session_;

    FsmState state_ = FsmState::Idle;
    std::array<std::atomic<bool>, data::kMaxSensors> drdy_flags_;
    std::atomic<bool> stop_requested_{false};

    bool cycle_active_ = false;
    sim::SimTime busy_until_ = 0;
    FixedVec<std::uint32_t, data::kMaxSensors> service_queue_;
    std::size_t service_pos_ = 0;
    data::SampleRecord pending_sample_;

    std::array<std::uint8_t, 128> frame_buf_{};
    std::size_t frame_len_ = 0;

    std::array<std::uint8_t, data::kCmdBufCap + 64> rx_buf_{};
    std::size_t rx_len_ = 0;
    FixedString<data::kCmdBufCap> pending_cmd_json_;
    bool has_pending_cmd_ = false;
    bool stop_response_deferred_ = false;

    bool tracing_ = false;
    CycleTrace current_{};
    std::vector<CycleTrace> traces_;
    std::uint64_t frames_emitted_ = 0;
    std::uint64_t flag_sets_ = 0;
    std::uint64_t flag_clears_ = 0;
};

}  // namespace vdl::agent
