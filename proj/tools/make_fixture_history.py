#!/usr/bin/env python3
"""Writes the bundled 60-day active-case history ending 2021-04-20.

Only the final-day counts are observed values. Earlier days are a smooth
exponential ramp back from them at a per-region daily growth rate, so the
series are rising and deterministic.
"""
import csv
import datetime
import math
import sys

END = datetime.date(2021, 4, 20)
DAYS = 60

# region, active cases on END, daily growth rate
REGIONS = [
    ("Maharashtra", 683856, 0.035),
    ("Gujarat", 76500, 0.060),
    ("Karnataka", 159158, 0.070),
    ("Madhya Pradesh", 78271, 0.060),
    ("Delhi", 85571, 0.075),
    ("Haryana", 49772, 0.065),
    ("Uttar Pradesh", 223544, 0.090),
    ("Tamil Nadu", 79804, 0.050),
    ("Kerala", 118669, 0.060),
    ("Chhattisgarh", 125688, 0.055),
    ("Rajasthan", 85571, 0.070),
    ("Telangana", 42853, 0.065),
    ("Andhra Pradesh", 53889, 0.065),
    ("Uttarakhand", 21014, 0.070),
    ("Jammu and Kashmir", 13470, 0.040),
    ("Goa", 8241, 0.050),
    ("Chandigarh", 3959, 0.030),
    ("Himachal Pradesh", 10029, 0.055),
]


def main(path):
    with open(path, "w", newline="") as f:
        out = csv.writer(f, lineterminator="\n")
        out.writerow(["region", "date", "active"])
        for name, final, rate in REGIONS:
            for back in range(DAYS - 1, -1, -1):
                day = END - datetime.timedelta(days=back)
                value = final if back == 0 else round(final * math.exp(-rate * back))
                out.writerow([name, day.isoformat(), value])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "case_history_2021-04-20.csv")
