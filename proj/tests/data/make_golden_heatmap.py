# Copyright 2026 The RAS Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes golden_heatmap.ppm for the 4x4 map v[i] = i * i (row-major).

Min-max normalisation gives s = i^2 / 225; red = 255 s, blue = 255 (1 - s),
green = 0. 255 s = 17 i^2 / 15 never lands on a .5, so rounding is unambiguous.
"""
from pathlib import Path

pixels = bytearray()
for i in range(16):
    s = i * i / 225
    pixels += bytes([round(255 * s), 0, round(255 * (1 - s))])
Path(__file__).with_name("golden_heatmap.ppm").write_bytes(b"P6\n4 4\n255\n" + bytes(pixels))
