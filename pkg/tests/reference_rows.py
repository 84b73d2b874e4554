"""Reference per-document metric rows from a 12-document, 311-sentence news
annotation study comparing human, machine and machine-plus-human conditions.

These are regression fixtures for the aggregation arithmetic: every Avg value
below is the study's reported unweighted mean of its column, so feeding the rows
through ``aggregate`` must reproduce it to the stated tolerance.
"""

DOC_IDS = [
    "02_13", "02_14", "03_11", "03_12", "04_01", "04_06",
    "05_01", "05_02", "05_03", "07_02", "07_03", "07_07",
]

# doc -> (sentences, unique frames, frames per sentence) per condition
DIVERSITY = {
    "human": {
        "02_13": (22, 71, 3.23), "02_14": (13, 71, 5.46), "03_11": (27, 77, 2.85),
        "03_12": (19, 47, 2.47), "04_01": (50, 114, 2.28), "04_06": (9, 34, 3.78),
        "05_01": (14, 54, 3.86), "05_02": (26, 80, 3.08), "05_03": (3, 12, 4.00),
        "07_02": (21, 97, 4.62), "07_03": (13, 80, 6.15), "07_07": (20, 78, 3.90),
    },
    "machine": {
        "02_13": (22, 53, 2.41), "02_14": (23, 56, 2.43), "03_11": (26, 56, 2.15),
        "03_12": (26, 57, 2.19), "04_01": (46, 87, 1.89), "04_06": (9, 20, 2.22),
        "05_01": (15, 26, 1.73), "05_02": (23, 54, 2.35), "05_03": (20, 59, 2.95),
        "07_02": (22, 58, 2.64), "07_03": (13, 46, 3.54), "07_07": (17, 60, 3.53),
    },
    "machine_human": {
        "02_13": (22, 80, 3.64), "02_14": (23, 105, 4.57), "03_11": (28, 88, 3.14),
        "03_12": (27, 85, 3.15), "04_01": (49, 99, 2.02), "04_06": (10, 26, 2.60),
        "05_01": (15, 51, 3.40), "05_02": (26, 93, 3.58), "05_03": (20, 83, 4.15),
        "07_02": (22, 104, 4.73), "07_03": (13, 75, 5.77), "07_07": (20, 82, 4.10),
    },
}
DIVERSITY_AVG = {
    "human": (19.75, 67.91, 3.80),
    "machine": (21.83, 52.66, 2.50),
    "machine_human": (22.91, 80.91, 3.74),
}

# doc -> mean cosine per condition pair
SIMILARITY = {
    "02_13": (0.7199, 0.7763, 0.8461), "02_14": (0.6918, 0.8267, 0.8509),
    "03_11": (0.5625, 0.7768, 0.6927), "03_12": (0.6153, 0.7288, 0.7547),
    "04_01": (0.5686, 0.6757, 0.8322), "04_06": (0.5982, 0.7080, 0.7668),
    "05_01": (0.6167, 0.7193, 0.7520), "05_02": (0.6672, 0.7264, 0.8175),
    "05_03": (0.6835, 0.7250, 0.9116), "07_02": (0.6182, 0.7752, 0.7106),
    "07_03": (0.6053, 0.7843, 0.7186), "07_07": (0.6370, 0.7355, 0.7279),
}
SIMILARITY_AVG = (0.6320, 0.7465, 0.7818)

# doc -> (core annotated, minimum required, pct) per condition
COMPLETENESS = {
    "human": {
        "02_13": (229, 246, 93.09), "02_14": (309, 301, 100.00), "03_11": (268, 296, 90.54),
        "03_12": (193, 248, 77.82), "04_01": (578, 624, 92.63), "04_06": (159, 128, 100.00),
        "05_01": (210, 194, 100.00), "05_02": (447, 332, 100.00), "05_03": (38, 29, 100.00),
        "07_02": (438, 400, 100.00), "07_03": (294, 308, 95.45), "07_07": (323, 312, 100.00),
    },
    "machine": {
        "02_13": (92, 244, 37.70), "02_14": (120, 352, 34.09), "03_11": (106, 267, 39.70),
        "03_12": (111, 360, 30.83), "04_01": (186, 543, 34.25), "04_06": (27, 99, 27.27),
        "05_01": (49, 132, 37.12), "05_02": (90, 296, 30.41), "05_03": (107, 291, 36.77),
        "07_02": (108, 321, 33.64), "07_03": (66, 197, 33.50), "07_07": (87, 248, 35.08),
    },
    "machine_human": {
        "02_13": (338, 299, 100.00), "02_14": (523, 491, 100.00), "03_11": (350, 384, 91.15),
        "03_12": (358, 412, 86.89), "04_01": (407, 567, 71.78), "04_06": (130, 152, 85.53),
        "05_01": (173, 213, 81.22), "05_02": (346, 428, 80.84), "05_03": (284, 314, 90.45),
        "07_02": (465, 386, 100.00), "07_03": (318, 284, 100.00), "07_07": (364, 314, 100.00),
    },
}
COMPLETENESS_AVG = {"human": 95.79, "machine": 34.20, "machine_human": 90.65}

# doc -> (sentences, avg length, human minutes, machine+human minutes, printed diff)
TIME = {
    "02_13": (20, 82.1, 9.36, 9.37, -0.1), "02_14": (14, 152.64, 19.01, 11.03, 7.98),
    "03_11": (26, 101.58, 4.57, 9.89, -5.32), "03_12": (21, 80.14, 2.76, 4.61, -1.85),
    "04_01": (43, 88.07, 19.17, 3.23, 15.94), "04_06": (7, 101.29, 16.15, 6.34, 9.81),
    "05_01": (13, 91.08, 26.91, 38.12, -11.21), "05_02": (26, 104.5, 23.6, 18.13, 5.47),
    "05_03": (3, 129.33, 20.45, 5.72, 14.73), "07_02": (20, 116.0, 13.61, 19.61, -6.0),
    "07_03": (13, 135.85, 13.77, 17.68, -3.91), "07_07": (19, 107.11, 10.19, 11.89, -1.7),
}
TIME_AVG = (18.75, 107.47, 14.96, 12.97, 1.99)

# doc -> (total, accepted, created, deleted, updated)
EDITS = {
    "03_11": (230, 7, 18, 64, 141), "03_12": (228, 2, 18, 58, 150),
    "02_13": (161, 0, 25, 15, 121), "02_14": (276, 0, 18, 39, 219),
    "04_01": (320, 20, 68, 59, 173), "04_06": (80, 2, 4, 11, 63),
    "05_01": (113, 24, 7, 10, 72), "05_02": (222, 47, 5, 41, 129),
    "05_03": (139, 27, 19, 10, 83), "07_02": (253, 4, 8, 79, 162),
    "07_03": (182, 2, 9, 54, 117), "07_07": (229, 5, 11, 73, 140),
}
# doc -> reported percentages (accepted, created, deleted, updated)
EDITS_PCT = {
    "03_11": (3.04, 10.84, 27.83, 61.30), "03_12": (0.88, 10.59, 25.44, 65.79),
    "02_13": (0.00, 17.12, 9.32, 75.16), "02_14": (0.00, 7.59, 14.13, 79.35),
    "04_01": (6.25, 26.05, 18.44, 54.06), "04_06": (2.50, 5.80, 13.75, 78.75),
    "05_01": (21.24, 6.80, 8.85, 63.72), "05_02": (21.17, 2.76, 18.47, 58.11),
    "05_03": (19.42, 14.73, 7.19, 59.71), "07_02": (1.58, 4.60, 31.23, 64.03),
    "07_03": (1.10, 7.03, 29.67, 64.29), "07_07": (2.18, 7.05, 31.88, 61.14),
}
EDITS_AVG_PCT = (6.61, 10.08, 19.68, 65.45)
