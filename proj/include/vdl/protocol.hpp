#pragma once

// Serial framing and point-to-point master/slave transport.
//
// Wire format (see PROTOCOL.md for worked hex examples):
//   byte 0      [packet_type:4 | channel_id:4]   (type in the high nibble)
//   byte 1..2   payload_len, little-endian
//   byte 3      header checksum = XOR of bytes 0..2
//   byte 4..    payload
//   trailer     CRC-16/CCITT-FALSE over the payload, little-endian
//
// DataAsync payloads begin with a 16-bit wrapping per-channel sequence
// number (little-endian) used by the receiver for loss detection.

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "vdl/common.hpp"

namespace vdl::proto {

enum class PacketType : std::uint8_t {
    Beacon = 0,
    Ping = 1,
    Command = 2,
    Response = 3,
    DataAsync = 4,
    Error = 5,
};

inline constexpr std::size_t kHeaderSize = 4;
inline constexpr std::size_t kCrcSize = 2;
inline constexpr std::size_t kMaxPayload = 65535;

/// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no xorout.
/// Check value: crc16("123456789") == 0x29B1.
inline std::uint16_t crc16(std::span<const std::uint8_t> data) {
    std::uint16_t crc = 0xFFFF;
    for (std::uint8_t byte : data) {
        crc ^= static_cast<std::uint16_t>(byte) << 8;
        for (int bit = 0; bit < 8; ++bit) {
            crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                                 : static_cast<std::uint16_t>(crc << 1);
        }
    }
    return crc;
}

struct Frame {
    PacketType packet_type = PacketType::Beacon;
    std::uint8_t channel_id = 0;  // 0 for Command/Response/Error, 1..15 for DataAsync
    std::vector<std::uint8_t> payload;

    bool operator==(const Frame& other) const = default;
};

enum class CodecError {
    CapacityError,
    ChannelViolation,
    BadHeaderCheck,
    BadPayloadCrc,
    TruncatedFrame,
    UnknownPacketType,
};

inline const char* to_string(CodecError e) {
    switch (e) {
        case CodecError::CapacityError: return "CapacityError";
        case CodecError::ChannelViolation: return "ChannelViolation";
        case CodecError::BadHeaderCheck: return "BadHeaderCheck";
        case CodecError::BadPayloadCrc: return "BadPayloadCrc";
        case CodecError::TruncatedFrame: return "TruncatedFrame";
        case CodecError::UnknownPacketType: return "UnknownPacketType";
    }
    return "?";
}

inline bool channel_valid(PacketType t, std::uint8_t ch) {
    if (t == PacketType::DataAsync) {
        return ch >= 1 && ch <= 15;
    }
    if (t == PacketType::Command || t == PacketType::Response || t == PacketType::Error) {
        return ch == 0;
    }
    return ch <= 15;  // Beacon/Ping: any channel nibble
}

inline Expected<std::vector<std::uint8_t>, CodecError> encode_frame(const Frame& frame) {
    if (frame.payload.size() > kMaxPayload) {
        return CodecError::CapacityError;
    }
    if (!channel_valid(frame.packet_type, frame.channel_id)) {
        return CodecError::ChannelViolation;
    }
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + frame.payload.size() + kCrcSize);
    const auto len = static_cast<std::uint16_t>(frame.payload.size());
    out.push_back(static_cast<std::uint8_t>(
        (static_cast<std::uint8_t>(frame.packet_type) << 4) | (frame.channel_id & 0x0F)));
    out.push_back(static_cast<std::uint8_t>(len & 0xFF));
    out.push_back(static_cast<std::uint8_t>(len >> 8));
    out.push_back(static_cast<std::uint8_t>(out[0] ^ out[1] ^ out[2]));
    out.insert(out.end(), frame.payload.begin(), frame.payload.end());
    const std::uint16_t crc = crc16(frame.payload);
    out.push_back(static_cast<std::uint8_t>(crc & 0xFF));
    out.push_back(static_cast<std::uint8_t>(crc >> 8));
    return out;
}

inline Expected<Frame, CodecError> decode_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize + kCrcSize) {
        return CodecError::TruncatedFrame;
    }
    const std::uint8_t check = static_cast<std::uint8_t>(bytes[0] ^ bytes[1] ^ bytes[2]);
    if (check != bytes[3]) {
        return CodecError::BadHeaderCheck;
    }
    const std::uint8_t type_nibble = bytes[0] >> 4;
    if (type_nibble > static_cast<std::uint8_t>(PacketType::Error)) {
        return CodecError::UnknownPacketType;
    }
    const auto type = static_cast<PacketType>(type_nibble);
    const std::uint8_t channel = bytes[0] & 0x0F;
    if (!channel_valid(type, channel)) {
        return CodecError::ChannelViolation;
    }
    const std::size_t len = static_cast<std::size_t>(bytes[1]) |
                            (static_cast<std::size_t>(bytes[2]) << 8);
    if (bytes.size() != kHeaderSize + len + kCrcSize) {
        return CodecError::TruncatedFrame;
    }
    auto payload = bytes.subspan(kHeaderSize, len);
    const std::uint16_t crc = static_cast<std::uint16_t>(bytes[kHeaderSize + len]) |
                              (static_cast<std::uint16_t>(bytes[kHeaderSize + len + 1]) << 8);
    if (crc != crc16(payload)) {
        return CodecError::BadPayloadCrc;
    }
    Frame f;
    f.packet_type = type;
    f.channel_id = channel;
    f.payload.assign(payload.begin(), payload.end());
    return f;
}

/// Allocation-free encode into a caller-provided buffer. Same wire format
/// as encode_frame.
inline Expected<std::size_t, CodecError> encode_frame_into(PacketType type,
                                                           std::uint8_t channel_id,
                                                           std::span<const std::uint8_t> payload,
                                                           std::span<std::uint8_t> out) {
    if (payload.size() > kMaxPayload) {
        return CodecError::CapacityError;
    }
    if (!channel_valid(type, channel_id)) {
        return CodecError::ChannelViolation;
    }
    const std::size_t total = kHeaderSize + payload.size() + kCrcSize;
    if (out.size() < total) {
        return CodecError::CapacityError;
    }
    const auto len = static_cast<std::uint16_t>(payload.size());
    out[0] = static_cast<std::uint8_t>((static_cast<std::uint8_t>(type) << 4) |
                                       (channel_id & 0x0F));
    out[1] = static_cast<std::uint8_t>(len & 0xFF);
    out[2] = static_cast<std::uint8_t>(len >> 8);
    out[3] = static_cast<std::uint8_t>(out[0] ^ out[1] ^ out[2]);
    std::memcpy(out.data() + kHeaderSize, payload.data(), payload.size());
    const std::uint16_t crc = crc16(payload);
    out[kHeaderSize + len] = static_cast<std::uint8_t>(crc & 0xFF);
    out[kHeaderSize + len + 1] = static_cast<std::uint8_t>(crc >> 8);
    return total;
}

/// Non-owning view of a decoded frame; payload aliases the input buffer.
struct FrameView {
    PacketType packet_type = PacketType::Beacon;
    std::uint8_t channel_id = 0;
    std::span<const std::uint8_t> payload;
};

/// Allocation-free decode. The returned payload view is valid only as long
/// as `bytes` is.
inline Expected<FrameView, CodecError> decode_frame_view(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize + kCrcSize) {
        return CodecError::TruncatedFrame;
    }
    const std::uint8_t check = static_cast<std::uint8_t>(bytes[0] ^ bytes[1] ^ bytes[2]);
    if (check != bytes[3]) {
        return CodecError::BadHeaderCheck;
    }
    const std::uint8_t type_nibble = bytes[0] >> 4;
    if (type_nibble > static_cast<std::uint8_t>(PacketType::Error)) {
        return CodecError::UnknownPacketType;
    }
    const auto type = static_cast<PacketType>(type_nibble);
    const std::uint8_t channel = bytes[0] & 0x0F;
    if (!channel_valid(type, channel)) {
        return CodecError::ChannelViolation;
    }
    const std::size_t len = static_cast<std::size_t>(bytes[1]) |
                            (static_cast<std::size_t>(bytes[2]) << 8);
    if (bytes.size() != kHeaderSize + len + kCrcSize) {
        return CodecError::TruncatedFrame;
    }
    auto payload = bytes.subspan(kHeaderSize, len);
    const std::uint16_t crc = static_cast<std::uint16_t>(bytes[kHeaderSize + len]) |
                              (static_cast<std::uint16_t>(bytes[kHeaderSize + len + 1]) << 8);
    if (crc != crc16(payload)) {
        return CodecError::BadPayloadCrc;
    }
    return FrameView{type, channel, payload};
}

/// How many wire bytes the frame starting at the head of `bytes` will
/// occupy, once enough of the header is visible. 0 = need more bytes.
inline std::size_t frame_wire_size(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize) {
        return 0;
    }
    const std::size_t len = static_cast<std::size_t>(bytes[1]) |
                            (static_cast<std::size_t>(bytes[2]) << 8);
    return kHeaderSize + len + kCrcSize;
}

// ---------------------------------------------------------------------------
// SSTL transport: stop-and-wait command/response plus asynchronous
// multi-channel streaming from the slave.
// ---------------------------------------------------------------------------

enum class Role { Master, Slave };
enum class TransportState { Idle, AwaitingResponse, Streaming };

enum class TransportError {
    PipelineViolation,  // master already has an outstanding request
    NotStreaming,
    RoleViolation,
    BadChannel,
};

inline const char* to_string(TransportError e) {
    switch (e) {
        case TransportError::PipelineViolation: return "PipelineViolation";
        case TransportError::NotStreaming: return "NotStreaming";
        case TransportError::RoleViolation: return "RoleViolation";
        case TransportError::BadChannel: return "BadChannel";
    }
    return "?";
}

class TransportSession {
public:
    explicit TransportSession(Role role) : role_(role) {}

    Role role() const { return role_; }
    TransportState state() const { return state_; }
    std::uint16_t next_seq(std::uint8_t channel) const { return next_seq_[channel]; }

    /// Master side: issue a synchronous request. At most one may be in
    /// flight (stop-and-wait).
    Expected<Frame, TransportError> master_send_command(std::vector<std::uint8_t> payload) {
        if (role_ != Role::Master) {
            return TransportError::RoleViolation;
        }
        if (state_ == TransportState::AwaitingResponse) {
            return TransportError::PipelineViolation;
        }
        state_ = TransportState::AwaitingResponse;
        Frame f;
        f.packet_type = PacketType::Command;
        f.channel_id = 0;
        f.payload = std::move(payload);
        return f;
    }

    /// Master side: a Response frame arrived; closes the outstanding request.
    void master_on_response() {
        if (state_ == TransportState::AwaitingResponse) {
            state_ = TransportState::Idle;
        }
    }

    /// Slave side: the start command has been acknowledged, streaming begins.
    Expected<std::monostate, TransportError> slave_enter_streaming() {
        if (role_ != Role::Slave) {
            return TransportError::RoleViolation;
        }
        state_ = TransportState::Streaming;
        return std::monostate{};
    }

    void slave_leave_streaming() {
        if (state_ == TransportState::Streaming) {
            state_ = TransportState::Idle;
        }
    }

    /// Slave side: emit one DataAsync frame on a streaming channel.
    /// The channel's 16-bit wrapping sequence number is prepended to the
    /// payload and advances by exactly one per frame.
    Expected<Frame, TransportError> slave_emit_data(std::uint8_t channel_id,
                                                    std::span<const std::uint8_t> payload) {
        if (role_ != Role::Slave) {
            return TransportError::RoleViolation;
        }
        if (state_ != TransportState::Streaming) {
            return TransportError::NotStreaming;
        }
        if (channel_id < 1 || channel_id > 15) {
            return TransportError::BadChannel;
        }
        Frame f;
        f.packet_type = PacketType::DataAsync;
        f.channel_id = channel_id;
        const std::uint16_t seq = next_seq_[channel_id]++;
        f.payload.reserve(2 + payload.size());
        f.payload.push_back(static_cast<std::uint8_t>(seq & 0xFF));
        f.payload.push_back(static_cast<std::uint8_t>(seq >> 8));
        f.payload.insert(f.payload.end(), payload.begin(), payload.end());
        return f;
    }

    /// Allocation-free variant of slave_emit_data: writes the full wire
    /// frame (header + seq + payload + CRC) into `out`.
    Expected<std::size_t, TransportError> slave_emit_data_into(
        std::uint8_t channel_id, std::span<const std::uint8_t> payload,
        std::span<std::uint8_t> out) {
        if (role_ != Role::Slave) {
            return TransportError::RoleViolation;
        }
        if (state_ != TransportState::Streaming) {
            return TransportError::NotStreaming;
        }
        if (channel_id < 1 || channel_id > 15) {
            return TransportError::BadChannel;
        }
        std::uint8_t staged[2 + 64];
        if (payload.size() > sizeof staged - 2) {
            return TransportError::BadChannel;  // sample payloads are small by contract
        }
        const std::uint16_t seq = next_seq_[channel_id]++;
        staged[0] = static_cast<std::uint8_t>(seq & 0xFF);
        staged[1] = static_cast<std::uint8_t>(seq >> 8);
        std::memcpy(staged + 2, payload.data(), payload.size());
        auto encoded = encode_frame_into(PacketType::DataAsync, channel_id,
                                         std::span<const std::uint8_t>(staged, 2 + payload.size()),
                                         out);
        if (!encoded.ok()) {
            next_seq_[channel_id]--;  // frame was not produced
            return TransportError::BadChannel;
        }
        return *encoded;
    }

private:
    Role role_;
    TransportState state_ = TransportState::Idle;
    std::uint16_t next_seq_[16] = {};
};

}  // namespace vdl::proto
