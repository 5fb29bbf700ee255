#pragma once

// Wires kernel, sensors, agent, and controller into one simulated world
// and runs controller-side session scripts against it.
//
// Script lines are either a JSON command (one per line) or a directive
//   wait <n_periods>
// which advances simulated time by n periods of the first enabled sensor.

#include <cstdint>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vdl/agent.hpp"
#include "vdl/controller.hpp"
#include "vdl/data_layer.hpp"
#include "vdl/sensor.hpp"
#include "vdl/sim.hpp"

namespace vdl::harness {

inline constexpr std::uint64_t kLinkAgentToCtrl = 0;
inline constexpr std::uint64_t kLinkCtrlToAgent = 1;

struct HarnessConfig {
    agent::AgentMode mode = agent::AgentMode::FsmLoop;
    sim::TimingParams params;
    data::DeviceModel model = data::default_device_model();
    std::uint64_t sensor_seed = 1;
    std::uint64_t skew_num = 7477;
    std::uint64_t skew_den = 7680;
    std::uint64_t response_timeout_ns = 1'000'000'000;  // 1 s of simulated time
    std::size_t reserve_events = 1 << 14;
};

class SimHarness {
public:
    explicit SimHarness(const HarnessConfig& cfg)
        : cfg_(cfg),
          kernel_(cfg.reserve_events),
          a2c_link_(1 << 20),
          c2a_link_(1 << 16),
          controller_(cfg.model) {
        sensors_.reserve(cfg.model.sensors.size());
        for (std::size_t i = 0; i < cfg.model.sensors.size(); ++i) {
            sensors_.emplace_back(static_cast<std::uint32_t>(i), cfg.model.sensors[i],
                                  cfg.sensor_seed + i, cfg.skew_num, cfg.skew_den);
        }
        agent_ = std::make_unique<agent::Agent>(cfg.mode, kernel_, sensors_, a2c_link_,
                                                cfg.model, cfg.params);
        kernel_.set_dispatcher([this](const sim::SimEvent& ev) { dispatch(ev); });
    }

    sim::Kernel& kernel() { return kernel_; }
    agent::Agent& agent() { return *agent_; }
    ctrl::Controller& controller() { return controller_; }
    std::vector<sensor::VirtualSensor>& sensors() { return sensors_; }

    /// Test hook: silently discard the next DataAsync frame on its way to
    /// the controller (models a lossy link for gap-detection tests).
    void drop_next_data_frame() { drop_pending_ = true; }

    Expected<std::monostate, ctrl::ControllerError> send_command(std::string_view json) {
        auto bytes = controller_.make_command(json);
        if (!bytes.ok()) {
            return bytes.error();
        }
        auto done = c2a_link_.transmit(*bytes, kernel_.now(), cfg_.params);
        if (!done.ok()) {
            return ctrl::ControllerError::IoError;
        }
        (void)kernel_.schedule(*done, sim::EventKind::UartTxDone, kLinkCtrlToAgent);
        return std::monostate{};
    }

    Expected<std::monostate, ctrl::ControllerError> await_response() {
        const std::uint64_t before = controller_.responses_received();
        const sim::SimTime deadline = kernel_.now() + cfg_.response_timeout_ns;
        while (controller_.responses_received() == before) {
            if (!kernel_.run_next(deadline)) {
                return ctrl::ControllerError::Timeout;
            }
        }
        return std::monostate{};
    }

    Expected<std::monostate, ctrl::ControllerError> run_command(std::string_view json) {
        auto sent = send_command(json);
        if (!sent.ok()) {
            return sent;
        }
        return await_response();
    }

    /// Advance simulated time by n periods of the first enabled sensor.
    void wait_periods(std::uint64_t n) {
        kernel_.run_until(kernel_.now() + n * primary_period_ns());
    }

    std::uint64_t primary_period_ns() const {
        for (const auto& s : sensors_) {
            if (s.config().enabled && s.config().odr_hz > 0) {
                return s.period_ns();
            }
        }
        return 1'000'000;  // nothing enabled: nominal 1 ms step
    }

    /// Run a full session script; returns the finalized recording.
    Expected<ctrl::SessionRecording, ctrl::ControllerError> run_session(
        const std::vector<std::string>& script) {
        for (const auto& line : script) {
            if (line.empty() || line[0] == '#') {
                continue;
            }
            if (line.rfind("wait ", 0) == 0) {
                const std::uint64_t n = std::strtoull(line.c_str() + 5, nullptr, 10);
                wait_periods(n);
                continue;
            }
            auto r = run_command(line);
            if (!r.ok()) {
                return r.error();
            }
        }
        // drain in-flight frames
        kernel_.run_until(kernel_.now() + 10 * primary_period_ns());
        return controller_.recording();
    }

private:
    void dispatch(const sim::SimEvent& ev) {
        switch (ev.kind) {
            case sim::EventKind::SensorDrdy: {
                auto& s = sensors_[ev.a];
                if (agent_->state() == agent::FsmState::Streaming && s.config().enabled) {
                    s.on_drdy();
                    (void)agent_->on_drdy_interrupt(static_cast<std::uint32_t>(ev.a), ev.at);
                    (void)s.tick_drdy(kernel_, ev.at);
                }
                break;
            }
            case sim::EventKind::UartTxDone:
                deliver(ev.a);
                break;
            default:
                agent_->on_event(ev);
                break;
        }
    }

    void deliver(std::uint64_t link_id) {
        if (link_id == kLinkAgentToCtrl) {
            auto bytes = a2c_link_.next_transmission();
            if (drop_pending_) {
                auto view = proto::decode_frame_view(bytes);
                if (view.ok() && view->packet_type == proto::PacketType::DataAsync) {
                    drop_pending_ = false;
                    return;  // frame lost on the wire
                }
            }
            controller_.on_rx_bytes(bytes);
        } else {
            agent_->on_rx_bytes(c2a_link_.next_transmission(), kernel_.now());
        }
    }

    HarnessConfig cfg_;
    sim::Kernel kernel_;
    std::vector<sensor::VirtualSensor> sensors_;
    sim::UartLink a2c_link_;
    sim::UartLink c2a_link_;
    std::unique_ptr<agent::Agent> agent_;
    ctrl::Controller controller_;
    bool drop_pending_ = false;
};

}  // namespace vdl::harness
