#pragma once

// Binary footprint accounting: a minimal ELF section/symbol reader, a
// rule-based symbol categorizer, and ROM/RAM report arithmetic.
//
// The parser is total: arbitrary input yields a typed error, never UB.
// Little-endian ELF32 and ELF64 are supported.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vdl/common.hpp"

namespace vdl::elf {

enum class ElfError { NotElf, TruncatedHeader, UnsupportedEndianness };

inline const char* to_string(ElfError e) {
    switch (e) {
        case ElfError::NotElf: return "NotElf";
        case ElfError::TruncatedHeader: return "TruncatedHeader";
        case ElfError::UnsupportedEndianness: return "UnsupportedEndianness";
    }
    return "?";
}

struct SectionStats {
    std::string name;
    std::uint64_t size = 0;
    std::uint32_t type = 0;
};

struct SymbolInfo {
    std::string name;
    std::uint64_t size = 0;
};

namespace detail {

inline std::uint64_t rd(std::span<const std::uint8_t> b, std::size_t off, std::size_t n) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n && off + i < b.size(); ++i) {
        v |= static_cast<std::uint64_t>(b[off + i]) << (8 * i);
    }
    return v;
}

struct Layout {
    bool is64 = false;
    std::uint64_t shoff = 0;
    std::uint64_t shentsize = 0;
    std::uint64_t shnum = 0;
    std::uint64_t shstrndx = 0;
};

inline Expected<Layout, ElfError> read_layout(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 || bytes[0] != 0x7F || bytes[1] != 'E' || bytes[2] != 'L' ||
        bytes[3] != 'F') {
        return ElfError::NotElf;
    }
    if (bytes.size() < 0x40) {
        return ElfError::TruncatedHeader;
    }
    const std::uint8_t ei_class = bytes[4];
    const std::uint8_t ei_data = bytes[5];
    if (ei_data != 1) {
        return ElfError::UnsupportedEndianness;
    }
    if (ei_class != 1 && ei_class != 2) {
        return ElfError::NotElf;
    }
    Layout l;
    l.is64 = (ei_class == 2);
    if (l.is64) {
        l.shoff = rd(bytes, 0x28, 8);
        l.shentsize = rd(bytes, 0x3A, 2);
        l.shnum = rd(bytes, 0x3C, 2);
        l.shstrndx = rd(bytes, 0x3E, 2);
    } else {
        l.shoff = rd(bytes, 0x20, 4);
        l.shentsize = rd(bytes, 0x2E, 2);
        l.shnum = rd(bytes, 0x30, 2);
        l.shstrndx = rd(bytes, 0x32, 2);
    }
    return l;
}

struct RawSection {
    std::uint32_t name_off = 0;
    std::uint32_t type = 0;
    std::uint64_t offset = 0;
    std::uint64_t size = 0;
    std::uint32_t link = 0;
    std::uint64_t entsize = 0;
};

inline RawSection read_section(std::span<const std::uint8_t> bytes, const Layout& l,
                               std::uint64_t index) {
    const std::uint64_t base = l.shoff + index * l.shentsize;
    RawSection s;
    s.name_off = static_cast<std::uint32_t>(rd(bytes, base + 0, 4));
    s.type = static_cast<std::uint32_t>(rd(bytes, base + 4, 4));
    if (l.is64) {
        s.offset = rd(bytes, base + 24, 8);
        s.size = rd(bytes, base + 32, 8);
        s.link = static_cast<std::uint32_t>(rd(bytes, base + 40, 4));
        s.entsize = rd(bytes, base + 56, 8);
    } else {
        s.offset = rd(bytes, base + 16, 4);
        s.size = rd(bytes, base + 20, 4);
        s.link = static_cast<std::uint32_t>(rd(bytes, base + 24, 4));
        s.entsize = rd(bytes, base + 36, 4);
    }
    return s;
}

inline std::string read_name(std::span<const std::uint8_t> bytes, std::uint64_t strtab_off,
                             std::uint64_t strtab_size, std::uint64_t name_off) {
    std::string out;
    std::uint64_t pos = strtab_off + name_off;
    while (name_off < strtab_size && pos < bytes.size() && bytes[pos] != 0) {
        out.push_back(static_cast<char>(bytes[pos]));
        ++pos;
        ++name_off;
    }
    return out;
}

}  // namespace detail

/// Section names and sizes exactly as declared by the section header table.
inline Expected<std::vector<SectionStats>, ElfError> parse_elf_sections(
    std::span<const std::uint8_t> bytes) {
    auto layout = detail::read_layout(bytes);
    if (!layout.ok()) {
        return layout.error();
    }
    const auto& l = *layout;
    const std::uint64_t min_entsize = l.is64 ? 64 : 40;
    if (l.shnum > 0 && (l.shentsize < min_entsize ||
                        l.shoff + l.shnum * l.shentsize > bytes.size())) {
        return ElfError::TruncatedHeader;
    }
    std::vector<SectionStats> out;
    detail::RawSection shstr{};
    if (l.shstrndx < l.shnum) {
        shstr = detail::read_section(bytes, l, l.shstrndx);
    }
    for (std::uint64_t i = 0; i < l.shnum; ++i) {
        auto raw = detail::read_section(bytes, l, i);
        SectionStats s;
        s.name = detail::read_name(bytes, shstr.offset, shstr.size, raw.name_off);
        s.size = raw.size;
        s.type = raw.type;
        out.push_back(std::move(s));
    }
    return out;
}

/// Defined symbols (functions and objects) with nonzero size from .symtab.
inline Expected<std::vector<SymbolInfo>, ElfError> parse_elf_symbols(
    std::span<const std::uint8_t> bytes) {
    auto layout = detail::read_layout(bytes);
    if (!layout.ok()) {
        return layout.error();
    }
    const auto& l = *layout;
    if (l.shnum > 0 && l.shoff + l.shnum * l.shentsize > bytes.size()) {
        return ElfError::TruncatedHeader;
    }
    std::vector<SymbolInfo> out;
    constexpr std::uint32_t kShtSymtab = 2;
    for (std::uint64_t i = 0; i < l.shnum; ++i) {
        auto sec = detail::read_section(bytes, l, i);
        if (sec.type != kShtSymtab || sec.entsize == 0) {
            continue;
        }
        detail::RawSection strtab{};
        if (sec.link < l.shnum) {
            strtab = detail::read_section(bytes, l, sec.link);
        }
        const std::uint64_t count = sec.size / sec.entsize;
        for (std::uint64_t k = 0; k < count; ++k) {
            const std::uint64_t base = sec.offset + k * sec.entsize;
            if (base + sec.entsize > bytes.size()) {
                break;
            }
            std::uint32_t name_off;
            std::uint64_t size;
            std::uint8_t info;
            if (l.is64) {
                name_off = static_cast<std::uint32_t>(detail::rd(bytes, base + 0, 4));
                info = static_cast<std::uint8_t>(detail::rd(bytes, base + 4, 1));
                size = detail::rd(bytes, base + 16, 8);
            } else {
                name_off = static_cast<std::uint32_t>(detail::rd(bytes, base + 0, 4));
                size = detail::rd(bytes, base + 8, 4);
                info = static_cast<std::uint8_t>(detail::rd(bytes, base + 12, 1));
            }
            const std::uint8_t type = info & 0x0F;
            constexpr std::uint8_t kSttObject = 1, kSttFunc = 2;
            if (size == 0 || (type != kSttObject && type != kSttFunc)) {
                continue;
            }
            SymbolInfo sym;
            sym.name = detail::read_name(bytes, strtab.offset, strtab.size, name_off);
            sym.size = size;
            out.push_back(std::move(sym));
        }
    }
    return out;
}

inline Expected<std::vector<std::uint8_t>, ElfError> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return ElfError::NotElf;
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

// ---------------------------------------------------------------------------
// Symbol categorization
// ---------------------------------------------------------------------------

enum class Category : std::uint8_t { Application, Drivers, Serialization, System, Hal };
inline constexpr std::size_t kCategoryCount = 5;

inline const char* to_string(Category c) {
    switch (c) {
        case Category::Application: return "Application";
        case Category::Drivers: return "Drivers";
        case Category::Serialization: return "Serialization";
        case Category::System: return "System";
        case Category::Hal: return "HAL";
    }
    return "?";
}

inline bool category_from_string(std::string_view s, Category& out) {
    if (s == "Application" || s == "application") {
        out = Category::Application;
    } else if (s == "Drivers" || s == "drivers") {
        out = Category::Drivers;
    } else if (s == "Serialization" || s == "serialization") {
        out = Category::Serialization;
    } else if (s == "System" || s == "system") {
        out = Category::System;
    } else if (s == "HAL" || s == "hal") {
        out = Category::Hal;
    } else {
        return false;
    }
    return true;
}

/// One `pattern=category` rule. A pattern starting with '^' matches symbol
/// name prefixes; otherwise it matches any substring. First rule wins.
struct CategoryRule {
    std::string pattern;
    Category category = Category::Application;

    bool matches(std::string_view symbol) const {
        if (!pattern.empty() && pattern.front() == '^') {
            return symbol.starts_with(std::string_view(pattern).substr(1));
        }
        return symbol.find(pattern) != std::string_view::npos;
    }
};

struct CategoryBreakdown {
    std::uint64_t bytes[kCategoryCount] = {};
    std::uint64_t uncategorized = 0;
    std::uint64_t total = 0;
};

inline CategoryBreakdown categorize(const std::vector<SymbolInfo>& symbols,
                                    const std::vector<CategoryRule>& rules) {
    if (rules.empty()) {
        throw LogicError("categorize: rules must be nonempty");
    }
    CategoryBreakdown bd;
    for (const auto& sym : symbols) {
        bd.total += sym.size;
        bool matched = false;
        for (const auto& rule : rules) {
            if (rule.matches(sym.name)) {
                bd.bytes[static_cast<std::size_t>(rule.category)] += sym.size;
                matched = true;
                break;
            }
        }
        if (!matched) {
            bd.uncategorized += sym.size;
        }
    }
    return bd;
}

inline Expected<std::vector<CategoryRule>, ElfError> parse_rules(std::istream& in) {
    std::vector<CategoryRule> rules;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view sv = line;
        while (!sv.empty() && (sv.back() == '\r' || sv.back() == ' ')) {
            sv.remove_suffix(1);
        }
        if (sv.empty() || sv.front() == '#') {
            continue;
        }
        const auto eq = sv.rfind('=');
        if (eq == std::string_view::npos) {
            return ElfError::NotElf;  // malformed rules file
        }
        CategoryRule r;
        r.pattern = std::string(sv.substr(0, eq));
        if (!category_from_string(sv.substr(eq + 1), r.category)) {
            return ElfError::NotElf;
        }
        rules.push_back(std::move(r));
    }
    return rules;
}

// ---------------------------------------------------------------------------
// ROM/RAM report arithmetic
// ---------------------------------------------------------------------------

/// Raw inputs are carried alongside computed totals so that any externally
/// quoted total that disagrees with the arithmetic stays visible.
struct MemoryReport {
    std::uint64_t text = 0;
    std::uint64_t rodata = 0;
    std::uint64_t total_rom = 0;  // text + rodata

    std::uint64_t stack = 0;
    std::uint64_t static_ram = 0;
    std::uint64_t heap = 0;
    std::uint64_t total_ram = 0;  // stack + static + heap

    std::int64_t quoted_total_ram = -1;  // externally reported figure, if any
    bool quoted_total_matches() const {
        return quoted_total_ram < 0 ||
               static_cast<std::uint64_t>(quoted_total_ram) == total_ram;
    }
};

inline MemoryReport build_memory_report(std::uint64_t text, std::uint64_t rodata,
                                        std::uint64_t stack_bytes, std::uint64_t static_bytes,
                                        std::uint64_t heap_bytes,
                                        std::int64_t quoted_total_ram = -1) {
    MemoryReport r;
    r.text = text;
    r.rodata = rodata;
    r.total_rom = text + rodata;
    r.stack = stack_bytes;
    r.static_ram = static_bytes;
    r.heap = heap_bytes;
    r.total_ram = stack_bytes + static_bytes + heap_bytes;
    r.quoted_total_ram = quoted_total_ram;
    return r;
}

/// Convenience: text/rodata from parsed sections, static RAM = .data + .bss.
inline MemoryReport build_memory_report(const std::vector<SectionStats>& sections,
                                        std::uint64_t stack_bytes, std::uint64_t heap_bytes,
                                        std::int64_t quoted_total_ram = -1) {
    std::uint64_t text = 0, rodata = 0, static_ram = 0;
    for (const auto& s : sections) {
        if (s.name == ".text") {
            text += s.size;
        } else if (s.name == ".rodata") {
            rodata += s.size;
        } else if (s.name == ".data" || s.name == ".bss") {
            static_ram += s.size;
        }
    }
    return build_memory_report(text, rodata, stack_bytes, static_ram, heap_bytes,
                               quoted_total_ram);
}

/// Text table mirroring the usual footprint summary columns. Pass one or
/// two reports; with two, a delta column (b - a) is included.
inline std::string memory_table(const MemoryReport& a, const MemoryReport* b = nullptr,
                                std::string_view label_a = "A", std::string_view label_b = "B") {
    std::ostringstream os;
    auto row = [&](std::string_view metric, std::uint64_t va, std::uint64_t vb) {
        os << std::left << std::setw(18) << metric << std::right << std::setw(12) << va;
        if (b != nullptr) {
            os << std::setw(12) << vb << std::setw(12)
               << (static_cast<std::int64_t>(vb) - static_cast<std::int64_t>(va));
        }
        os << '\n';
    };
    os << std::left << std::setw(18) << "Metric (bytes)" << std::right << std::setw(12)
       << label_a;
    if (b != nullptr) {
        os << std::setw(12) << label_b << std::setw(12) << "delta";
    }
    os << '\n';
    row(".text", a.text, b ? b->text : 0);
    row(".rodata", a.rodata, b ? b->rodata : 0);
    row("Total ROM", a.total_rom, b ? b->total_rom : 0);
    row("Stack RAM", a.stack, b ? b->stack : 0);
    row("Static RAM", a.static_ram, b ? b->static_ram : 0);
    row("Heap RAM", a.heap, b ? b->heap : 0);
    row("Total RAM", a.total_ram, b ? b->total_ram : 0);
    auto quoted = [&](const MemoryReport& r, std::string_view label) {
        if (r.quoted_total_ram >= 0 && !r.quoted_total_matches()) {
            os << "note: " << label << " quoted total RAM " << r.quoted_total_ram
               << " differs from computed " << r.total_ram << '\n';
        }
    };
    quoted(a, label_a);
    if (b != nullptr) {
        quoted(*b, label_b);
    }
    return os.str();
}

inline std::string breakdown_csv(const CategoryBreakdown& bd) {
    std::string out = "category,bytes\n";
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
        out += std::string(to_string(static_cast<Category>(i))) + ',' +
               std::to_string(bd.bytes[i]) + '\n';
    }
    out += "Uncategorized," + std::to_string(bd.uncategorized) + '\n';
    out += "Total," + std::to_string(bd.total) + '\n';
    return out;
}

}  // namespace vdl::elf
