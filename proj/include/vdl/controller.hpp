#pragma once

// Host-side SSTL master: issues commands, collects streamed samples,
// validates per-channel sequence continuity, and exports recordings.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vdl/data_layer.hpp"
#include "vdl/protocol.hpp"
#include "vdl/sim.hpp"

namespace vdl::ctrl {

enum class ControllerError { Timeout, ProtocolError, IoError };

inline const char* to_string(ControllerError e) {
    switch (e) {
        case ControllerError::Timeout: return "Timeout";
        case ControllerError::ProtocolError: return "ProtocolError";
        case ControllerError::IoError: return "IoError";
    }
    return "?";
}

struct RecordedSample {
    std::uint16_t seq = 0;
    data::SampleRecord sample;
};

struct ChannelRecording {
    std::uint8_t channel_id = 0;
    data::SampleKind kind = data::SampleKind::Inertial;
    std::vector<RecordedSample> samples;
    std::uint64_t gap_count = 0;  // sequence discontinuities observed
};

struct TranscriptEntry {
    std::string command;
    std::string response;
    bool is_error = false;
};

struct SessionRecording {
    std::vector<ChannelRecording> channels;  // indexed by channel id 0..15
    std::vector<TranscriptEntry> transcript;

    SessionRecording() : channels(16) {
        for (std::size_t i = 0; i < channels.size(); ++i) {
            channels[i].channel_id = static_cast<std::uint8_t>(i);
        }
    }

    std::uint64_t total_gaps() const {
        std::uint64_t n = 0;
        for (const auto& c : channels) {
            n += c.gap_count;
        }
        return n;
    }
};

/// Passive controller state machine; a harness feeds it received bytes and
/// transmits the frames it produces.
class Controller {
public:
    explicit Controller(const data::DeviceModel& model, std::size_t reserve_samples = 1 << 16)
        : model_(model), session_(proto::Role::Master) {
        for (const auto& s : model.sensors) {
            recording_.channels[s.channel_id].kind =
                (s.kind == data::SensorKind::MlcClassifier) ? data::SampleKind::Classifier
                                                            : data::SampleKind::Inertial;
        }
        for (auto& c : recording_.channels) {
            c.samples.reserve(reserve_samples / recording_.channels.size() + 16);
        }
    }

    proto::TransportSession& session() { return session_; }
    SessionRecording& recording() { return recording_; }
    const SessionRecording& recording() const { return recording_; }

    bool awaiting_response() const {
        return session_.state() == proto::TransportState::AwaitingResponse;
    }

    /// Build the wire bytes for a command carrying `json_payload`.
    Expected<std::vector<std::uint8_t>, ControllerError> make_command(
        std::string_view json_payload) {
        std::vector<std::uint8_t> payload(json_payload.begin(), json_payload.end());
        auto frame = session_.master_send_command(std::move(payload));
        if (!frame.ok()) {
            return ControllerError::ProtocolError;
        }
        auto bytes = proto::encode_frame(*frame);
        if (!bytes.ok()) {
            return ControllerError::ProtocolError;
        }
        recording_.transcript.push_back({std::string(json_payload), "", false});
        return *bytes;
    }

    /// Feed received bytes; returns the number of complete frames consumed.
    std::size_t on_rx_bytes(std::span<const std::uint8_t> bytes) {
        std::size_t frames = 0;
        for (std::uint8_t b : bytes) {
            if (rx_len_ < rx_buf_.size()) {
                rx_buf_[rx_len_++] = b;
            }
        }
        while (true) {
            const std::size_t want = proto::frame_wire_size({rx_buf_.data(), rx_len_});
            if (want == 0 || rx_len_ < want) {
                return frames;
            }
            auto view = proto::decode_frame_view({rx_buf_.data(), want});
            if (view.ok()) {
                dispatch(*view);
                ++frames;
            } else {
                ++decode_errors_;
            }
            std::memmove(rx_buf_.data(), rx_buf_.data() + want, rx_len_ - want);
            rx_len_ -= want;
        }
    }

    std::uint64_t decode_errors() const { return decode_errors_; }
    std::uint64_t responses_received() const { return responses_received_; }

private:
    void dispatch(const proto::FrameView& f) {
        switch (f.packet_type) {
            case proto::PacketType::Response:
            case proto::PacketType::Error: {
                session_.master_on_response();
                ++responses_received_;
                if (!recording_.transcript.empty()) {
                    auto& entry = recording_.transcript.back();
                    entry.response.assign(reinterpret_cast<const char*>(f.payload.data()),
                                          f.payload.size());
                    entry.is_error = (f.packet_type == proto::PacketType::Error);
                }
                break;
            }
            case proto::PacketType::DataAsync: {
                if (f.payload.size() < 2) {
                    ++decode_errors_;
                    return;
                }
                const std::uint16_t seq = static_cast<std::uint16_t>(f.payload[0]) |
                                          (static_cast<std::uint16_t>(f.payload[1]) << 8);
                auto& chan = recording_.channels[f.channel_id];
                auto sample = data::decode_sample(chan.kind, f.payload.subspan(2));
                if (!sample.ok()) {
                    ++decode_errors_;
                    return;
                }
                if (!chan.samples.empty()) {
                    const std::uint16_t expected =
                        static_cast<std::uint16_t>(chan.samples.back().seq + 1);
                    if (seq != expected) {
                        ++chan.gap_count;
                    }
                }
                chan.samples.push_back({seq, *sample});
                break;
            }
            default:
                break;
        }
    }

    data::DeviceModel model_;
    proto::TransportSession session_;
    SessionRecording recording_;
    std::array<std::uint8_t, 2048> rx_buf_{};
    std::size_t rx_len_ = 0;
    std::uint64_t decode_errors_ = 0;
    std::uint64_t responses_received_ = 0;
};

/// Write one CSV per non-empty channel: seq,timestamp_us,<fields>.
/// Output is byte-identical for identical recordings.
inline void export_recording(const SessionRecording& recording,
                             const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& chan : recording.channels) {
        if (chan.samples.empty() && chan.channel_id == 0) {
            continue;  // channel 0 carries no data frames
        }
        if (chan.samples.empty()) {
            continue;
        }
        const auto path = dir / ("channel_" + std::to_string(chan.channel_id) + ".csv");
        std::ofstream os(path, std::ios::binary);
        if (!os) {
            throw IoError("export_recording: cannot open " + path.string());
        }
        if (chan.kind == data::SampleKind::Inertial) {
            os << "seq,timestamp_us,x,y,z\n";
            for (const auto& r : chan.samples) {
                os << r.seq << ',' << r.sample.timestamp_us << ',' << r.sample.x << ','
                   << r.sample.y << ',' << r.sample.z << '\n';
            }
        } else {
            os << "seq,timestamp_us,class_id\n";
            for (const auto& r : chan.samples) {
                os << r.seq << ',' << r.sample.timestamp_us << ','
                   << static_cast<unsigned>(r.sample.class_id) << '\n';
            }
        }
    }
}

/// CSV snapshot of one channel as a string (used by golden tests and the
/// CLI when writing to stdout).
inline std::string channel_csv(const ChannelRecording& chan) {
    std::string out;
    if (chan.kind == data::SampleKind::Inertial) {
        out += "seq,timestamp_us,x,y,z\n";
        for (const auto& r : chan.samples) {
            out += std::to_string(r.seq) + ',' + std::to_string(r.sample.timestamp_us) + ',' +
                   std::to_string(r.sample.x) + ',' + std::to_string(r.sample.y) + ',' +
                   std::to_string(r.sample.z) + '\n';
        }
    } else {
        out += "seq,timestamp_us,class_id\n";
        for (const auto& r : chan.samples) {
            out += std::to_string(r.seq) + ',' + std::to_string(r.sample.timestamp_us) + ',' +
                   std::to_string(static_cast<unsigned>(r.sample.class_id)) + '\n';
        }
    }
    return out;
}

}  // namespace vdl::ctrl
