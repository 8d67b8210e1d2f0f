//! Published runtimes for five IBM systems, used for calibration and as
//! regression targets. Values are as printed, i.e. rounded.

/// A CLOPS-protocol-sized QV job (`M = S = 100`, `K = 1`, `d_eff = log2 QV`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QvJobRecord {
    pub backend: &'static str,
    pub quantum_volume: u64,
    pub clops: f64,
    pub actual: f64,
    pub predicted: f64,
    pub ratio: f64,
    pub loss: f64,
}

pub const QV_JOBS: [QvJobRecord; 5] = [
    QvJobRecord {
        backend: "ibm_hanoi",
        quantum_volume: 64,
        clops: 2300.0,
        actual: 68.0,
        predicted: 25.6,
        ratio: 0.4,
        loss: 1.7,
    },
    QvJobRecord {
        backend: "ibmq_guadalupe",
        quantum_volume: 32,
        clops: 2400.0,
        actual: 41.0,
        predicted: 21.3,
        ratio: 0.5,
        loss: 0.9,
    },
    QvJobRecord {
        backend: "ibmq_jakarta",
        quantum_volume: 16,
        clops: 2400.0,
        actual: 31.0,
        predicted: 16.4,
        ratio: 0.5,
        loss: 0.9,
    },
    QvJobRecord {
        backend: "ibmq_mumbai",
        quantum_volume: 128,
        clops: 1800.0,
        actual: 97.0,
        predicted: 38.2,
        ratio: 0.4,
        loss: 1.5,
    },
    QvJobRecord {
        backend: "ibmq_toronto",
        quantum_volume: 32,
        clops: 1800.0,
        actual: 48.0,
        predicted: 28.0,
        ratio: 0.6,
        loss: 0.7,
    },
];

/// Shot counts of the QV shot sweep (`M = 100`).
pub const SHOT_SWEEP_SHOTS: [u64; 7] = [10, 50, 100, 500, 1000, 4000, 8000];

/// Loss and ratio per shot count, aligned with [`SHOT_SWEEP_SHOTS`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotSweepRecord {
    pub backend: &'static str,
    pub loss: [f64; 7],
    pub ratio: [f64; 7],
}

pub const SHOT_SWEEP: [ShotSweepRecord; 5] = [
    ShotSweepRecord {
        backend: "ibm_hanoi",
        loss: [24.36, 4.07, 1.65, 0.60, 1.76, 4.51, 5.72],
        ratio: [0.04, 0.20, 0.38, 1.60, 2.76, 5.51, 6.72],
    },
    ShotSweepRecord {
        backend: "ibmq_guadalupe",
        loss: [16.87, 2.57, 0.93, 1.01, 2.08, 4.22, 4.97],
        ratio: [0.06, 0.28, 0.52, 2.01, 3.08, 5.22, 5.97],
    },
    ShotSweepRecord {
        backend: "ibmq_jakarta",
        loss: [16.68, 2.78, 0.89, 0.91, 1.83, 3.46, 3.95],
        ratio: [0.06, 0.26, 0.53, 1.91, 2.83, 4.46, 4.95],
    },
    ShotSweepRecord {
        backend: "ibmq_mumbai",
        loss: [23.34, 3.71, 1.54, 0.72, 1.99, 5.59, 7.20],
        ratio: [0.04, 0.21, 0.39, 1.72, 2.99, 6.59, 8.20],
    },
    ShotSweepRecord {
        backend: "ibmq_toronto",
        loss: [16.49, 2.43, 0.71, 1.26, 2.59, 5.67, 6.84],
        ratio: [0.06, 0.29, 0.58, 2.26, 3.59, 6.67, 7.84],
    },
];

/// Aggregate loss and ratio of kernel jobs with square circuits, by
/// entanglement strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelAggregateRecord {
    pub backend: &'static str,
    pub full_loss: f64,
    pub linear_loss: f64,
    pub full_ratio: f64,
    pub linear_ratio: f64,
}

pub const KERNEL_AGGREGATES: [KernelAggregateRecord; 3] = [
    KernelAggregateRecord {
        backend: "ibm_hanoi",
        full_loss: 1.98,
        linear_loss: 26.50,
        full_ratio: 0.50,
        linear_ratio: 0.07,
    },
    KernelAggregateRecord {
        backend: "ibmq_guadalupe",
        full_loss: 0.55,
        linear_loss: 1.59,
        full_ratio: 0.84,
        linear_ratio: 0.41,
    },
    KernelAggregateRecord {
        backend: "ibmq_toronto",
        full_loss: 0.13,
        linear_loss: 4.84,
        full_ratio: 1.01,
        linear_ratio: 0.25,
    },
];
