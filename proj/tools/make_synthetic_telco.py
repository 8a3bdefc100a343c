#!/usr/bin/env python3
# Copyright 2026 The qembed Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes a synthetic customer-churn CSV with the Telco column layout.

Service columns carry the "No phone service" / "No internet service" levels,
MonthlyCharges is a near-linear function of the subscribed services,
TotalCharges tracks tenure * MonthlyCharges (blank when tenure is 0), and
churn depends on contract, tenure, internet type and payment method.
"""

import argparse
import csv
import math
import random

SERVICES = ["OnlineSecurity", "OnlineBackup", "DeviceProtection", "TechSupport", "StreamingTV", "StreamingMovies"]
SERVICE_PRICE = {"OnlineSecurity": 5.0, "OnlineBackup": 5.0, "DeviceProtection": 5.0, "TechSupport": 5.0,
                 "StreamingTV": 10.0, "StreamingMovies": 10.0}
PAYMENT = ["Electronic check", "Mailed check", "Bank transfer (automatic)", "Credit card (automatic)"]
HEADER = ["customerID", "gender", "SeniorCitizen", "Partner", "Dependents", "tenure", "PhoneService",
          "MultipleLines", "InternetService"] + SERVICES + ["Contract", "PaperlessBilling", "PaymentMethod",
                                                            "MonthlyCharges", "TotalCharges", "Churn"]


def yes(rng, p):
    return "Yes" if rng.random() < p else "No"


def pick(rng, options, weights):
    return rng.choices(options, weights=weights, k=1)[0]


def row(rng, i):
    senior = 1 if rng.random() < 0.16 else 0
    partner = yes(rng, 0.48)
    dependents = yes(rng, 0.45 if partner == "Yes" else 0.12)
    contract = pick(rng, ["Month-to-month", "One year", "Two year"], [55, 21, 24])
    if contract == "Month-to-month":
        tenure = min(72, int(rng.expovariate(1 / 14.0)))
    elif contract == "One year":
        tenure = rng.randint(0, 72) // 2 + rng.randint(0, 36)
    else:
        tenure = min(72, 30 + rng.randint(0, 42))
    phone = yes(rng, 0.9)
    multiple = "No phone service" if phone == "No" else yes(rng, 0.47)
    internet = pick(rng, ["DSL", "Fiber optic", "No"], [34, 44, 22])

    monthly = 0.0
    if phone == "Yes":
        monthly += 20.0 + (5.0 if multiple == "Yes" else 0.0)
    if internet == "DSL":
        monthly += 25.0
    elif internet == "Fiber optic":
        monthly += 50.0
    services = {}
    for s in SERVICES:
        if internet == "No":
            services[s] = "No internet service"
        else:
            services[s] = yes(rng, 0.5 if s.startswith("Streaming") else 0.4)
            if services[s] == "Yes":
                monthly += SERVICE_PRICE[s]
    monthly = max(18.25, monthly + rng.gauss(0.0, 1.5))
    paperless = yes(rng, 0.59)
    payment = pick(rng, PAYMENT, [34, 23, 22, 21])

    if tenure == 0:
        total = " "
    else:
        total = "%.2f" % (tenure * monthly * (1.0 + rng.gauss(0.0, 0.05)))

    z = -1.1
    z += {"Month-to-month": 1.3, "One year": -0.5, "Two year": -1.8}[contract]
    z += -0.035 * tenure
    z += 0.9 if internet == "Fiber optic" else (-0.6 if internet == "No" else 0.0)
    z += 0.6 if payment == "Electronic check" else 0.0
    z += 0.35 * senior + (0.3 if paperless == "Yes" else 0.0)
    z += -0.3 if services["TechSupport"] == "Yes" else 0.0
    churn = "Yes" if rng.random() < 1.0 / (1.0 + math.exp(-z)) else "No"

    return ["%04d-SYNTH" % i, pick(rng, ["Female", "Male"], [1, 1]), str(senior), partner, dependents,
            str(tenure), phone, multiple, internet] + [services[s] for s in SERVICES] + \
           [contract, paperless, payment, "%.2f" % monthly, total, churn]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=500)
    ap.add_argument("--seed", type=int, default=20240)
    ap.add_argument("--out", default="data/telco_synthetic_500.csv")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    with open(args.out, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(HEADER)
        for i in range(args.rows):
            w.writerow(row(rng, i + 1))


if __name__ == "__main__":
    main()
