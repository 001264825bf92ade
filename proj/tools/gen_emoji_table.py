#!/usr/bin/env python3
"""Regenerates src/corpus/emoji_table.inc from the Unicode character database.

The table is committed; regenerate only when deliberately bumping the table
version, since normalized corpora depend on it byte-for-byte.
"""
import sys
import unicodedata

RANGES = [
    (0x2600, 0x27BF),
    (0x2B00, 0x2BFF),
    (0x1F000, 0x1F02F),
    (0x1F0A0, 0x1F0FF),
    (0x1F170, 0x1F251),
    (0x1F1E6, 0x1F1FF),
    (0x1F300, 0x1F5FF),
    (0x1F600, 0x1F64F),
    (0x1F680, 0x1F6FF),
    (0x1F900, 0x1F9FF),
    (0x1FA70, 0x1FAFF),
]
EXTRA = [0x00A9, 0x00AE, 0x203C, 0x2049, 0x2122, 0x2139, 0x231A, 0x231B,
         0x2328, 0x23CF, 0x23E9, 0x23EA, 0x23EB, 0x23EC, 0x23ED, 0x23EE,
         0x23EF, 0x23F0, 0x23F1, 0x23F2, 0x23F3, 0x23F8, 0x23F9, 0x23FA,
         0x24C2, 0x25AA, 0x25AB, 0x25B6, 0x25C0, 0x25FB, 0x25FC, 0x25FD,
         0x25FE, 0x2934, 0x2935, 0x3030, 0x303D, 0x3297, 0x3299]


def short_name(cp):
    name = unicodedata.name(chr(cp), "")
    if not name:
        return None
    out = []
    for ch in name.lower():
        out.append(ch if ch.isalnum() else "_")
    return "".join(out).strip("_")


def main():
    entries = {}
    for lo, hi in RANGES:
        for cp in range(lo, hi + 1):
            if unicodedata.category(chr(cp)) not in ("So", "Sk"):
                continue
            name = short_name(cp)
            if name:
                entries[cp] = name
    for cp in EXTRA:
        name = short_name(cp)
        if name:
            entries[cp] = name
    out = sys.stdout
    out.write("// Generated by tools/gen_emoji_table.py; Unicode %s. Do not edit.\n"
              % unicodedata.unidata_version)
    out.write('#define PERSUASION_EMOJI_TABLE_VERSION "unicode-%s"\n'
              % unicodedata.unidata_version)
    for cp in sorted(entries):
        out.write('{0x%X, "%s"},\n' % (cp, entries[cp]))


if __name__ == "__main__":
    main()
