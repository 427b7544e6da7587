#!/usr/bin/env python3
"""Writes the 200x200 binary test logo (ring, bar and a block letter T) as binary PGM."""
import sys

N = 200


def inside(x, y):
    cx, cy = x - 99.5, y - 99.5
    r2 = cx * cx + cy * cy
    if 70 ** 2 <= r2 <= 92 ** 2:
        return True
    # block T
    if 45 <= y < 70 and 50 <= x < 150:
        return True
    if 70 <= y < 150 and 87 <= x < 113:
        return True
    return False


def main(path):
    rows = bytearray()
    for y in range(N):
        for x in range(N):
            rows.append(255 if inside(x, y) else 0)
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (N, N))
        f.write(rows)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "logo.pgm")
