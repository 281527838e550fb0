#!/usr/bin/env python3
"""Writes the synthetic 64x64 four-region cartoon used by the examples and tests."""
import sys


def cartoon(n=64):
    img = []
    for r in range(n):
        row = []
        for c in range(n):
            v = 40  # background
            if (r - 20) ** 2 + (c - 20) ** 2 <= 12 ** 2:
                v = 200  # disk
            elif 38 <= r <= 56 and 6 <= c <= 30:
                v = 120  # rectangle
            elif r >= 10 and c >= 36 and c - 36 <= (r - 10) * 0.5 and r <= 54:
                v = 160  # wedge
            row.append(v)
        img.append(row)
    return img


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "cartoon64.pgm"
    img = cartoon()
    with open(out, "wb") as f:
        f.write(b"P5\n64 64\n255\n")
        f.write(bytes(v for row in img for v in row))


if __name__ == "__main__":
    main()
