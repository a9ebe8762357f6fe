//! Drives the module through an embedded interpreter.

use pyo3::ffi::c_str;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rgcsr_py::rgcsr_py as module;

fn with_module<F: FnOnce(Python<'_>, &Bound<'_, PyDict>)>(f: F) {
    pyo3::append_to_inittab!(module);
    Python::initialize();
    Python::attach(|py| {
        let globals = PyDict::new(py);
        globals
            .set_item("rg", py.import("rgcsr_py").unwrap())
            .unwrap();
        f(py, &globals);
    });
}

fn eval<'py>(py: Python<'py>, g: &Bound<'py, PyDict>, code: &std::ffi::CStr) -> Bound<'py, PyAny> {
    py.eval(code, Some(g), None).unwrap()
}

#[test]
fn module_round_trip() {
    with_module(|py, g| {
        let zeros: usize = eval(
            py,
            g,
            c_str!("rg.Format('rgcsr', rg.Matrix.example(), group_size=4).fill_report()['artificial_zeros']"),
        )
        .extract()
        .unwrap();
        assert_eq!(zeros, 7);

        let y: Vec<f64> = eval(
            py,
            g,
            c_str!("rg.Format('hybrid', rg.Matrix.example()).spmv([1.0] * 8)"),
        )
        .extract()
        .unwrap();
        assert_eq!(y, [3.0, 3.0, 4.0, 5.0, 6.0, 15.0, 30.0, 25.0]);

        let gflops: f64 = eval(
            py,
            g,
            c_str!("rg.peak_performance('double', False)['gflops']"),
        )
        .extract()
        .unwrap();
        assert_eq!(gflops, 14.1);

        let err = py
            .eval(
                c_str!("rg.simulate('bcsr', rg.Matrix.example())"),
                Some(g),
                None,
            )
            .unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
    });
}
