"""Readers, writers and the service layer."""

import json
import xml.etree.ElementTree as ET

import pyarrow as pa
import pyarrow.parquet as pq
import pytest

from conftest import TRIANGLE_EV, TRIANGLE_FV, TRIANGLE_V, square_segments
from larmerge import export, load
from larmerge.config import ExportConfig, RunConfig
from larmerge.errors import (
    DimensionMismatchError,
    EmptyInputError,
    MalformedInputError,
    UnsupportedFormatError,
)
from larmerge.pipeline.merge import arrange_segments, box_complex, merge
from larmerge.readers import LarReader, ObjReader
from larmerge.readers.lar import document_to_complex, parse_document
from larmerge.readers.obj import parse_obj
from larmerge.schemas import CELLS_SCHEMA, TRIPLES_SCHEMA, LarDocument
from larmerge.services import (
    ArrangementService,
    ChainService,
    ReaderFactory,
    StatsService,
    WriterFactory,
)
from larmerge.writers import LarWriter, ObjWriter, ParquetWriter, SvgWriter

SVG = "{http://www.w3.org/2000/svg}"


def test_parse_literal_document():
    document = parse_document(f"V = {TRIANGLE_V}\nEV = {TRIANGLE_EV}\nFV = {TRIANGLE_FV}\n")
    assert document.dim == 2
    assert len(document.V) == 6
    assert document.CV is None


def test_parse_json_document():
    text = json.dumps({"V": TRIANGLE_V, "EV": TRIANGLE_EV})
    complex_ = document_to_complex(parse_document(text))
    assert complex_.f_vector == (6, 8)


def test_malformed_json_reports_line():
    with pytest.raises(MalformedInputError) as info:
        parse_document('{\n  "V": [[0, 0],\n  ]\n}')
    assert info.value.line == 3
    assert "line 3" in str(info.value)


def test_literal_document_rejects_statements():
    with pytest.raises(MalformedInputError) as info:
        parse_document("V = [[0, 0]]\nprint(V)\n")
    assert info.value.line == 2


def test_unknown_operator_is_rejected():
    with pytest.raises(MalformedInputError):
        parse_document(json.dumps({"V": [[0, 0]], "operators": {"d7": []}}))


def test_document_without_vertices():
    with pytest.raises(EmptyInputError):
        parse_document('{"V": []}')


def test_lar_round_trip_is_byte_stable(triangle_file, tmp_path):
    complex_ = LarReader().read(str(triangle_file))
    first = LarWriter().write(complex_)
    copy = tmp_path / "copy.lar"
    copy.write_bytes(first)
    assert LarWriter().write(LarReader().read(str(copy))) == first


def test_lar_keeps_given_operators():
    # a face oriented against the canonical one
    text = json.dumps(
        {
            "V": [[0, 0], [1, 0], [0, 1]],
            "EV": [[0, 1], [1, 2], [0, 2]],
            "FV": [[0, 1, 2]],
            "operators": {"d2": [[0, 0, -1], [1, 0, -1], [2, 0, 1]]},
        }
    )
    complex_ = document_to_complex(parse_document(text))
    assert complex_.boundary(2).column(0) == {0: -1, 1: -1, 2: 1}


def test_lar_document_from_complex(unit_cube):
    document = LarDocument.from_complex(unit_cube)
    assert document.dim == 3
    assert sorted(document.operators) == ["d1", "d2", "d3"]
    assert len(document.operators["d3"]) == 6
    assert LarDocument.from_complex(unit_cube, operators=False).operators == {}


def test_obj_cube(cube_obj):
    path = cube_obj("cube.obj", (0, 0, 0), (1, 1, 1))
    complex_ = ObjReader().read(str(path))
    assert complex_.f_vector == (8, 12, 6)
    complex_.validate()


def test_obj_polylines_and_relative_indices():
    vertices, rings, polylines = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\nl 1/1 3\n")
    assert vertices.n == 3
    assert rings == [(0, 1, 2)]
    assert polylines == [(0, 2)]


def test_obj_reference_out_of_range():
    with pytest.raises(MalformedInputError) as info:
        parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n")
    assert (info.value.line, info.value.column) == (4, 7)


def test_svg_of_a_square():
    arrangement = arrange_segments(square_segments((0, 0), (1, 1)), RunConfig(jobs=1))
    root = ET.fromstring(SvgWriter(ExportConfig(svg_size=200)).write(arrangement))
    assert root.get("width") == "200"
    paths = root.findall(f"{SVG}g[@id='cells']/{SVG}path")
    assert [p.get("id") for p in paths] == ["cell-0"]
    assert paths[0].get("d").startswith("M ")
    assert len(root.findall(f"{SVG}g[@id='edges']/{SVG}line")) == 4


def test_svg_needs_planar_input(unit_cube):
    with pytest.raises(UnsupportedFormatError):
        SvgWriter().write(unit_cube)


def test_obj_writer_groups_cells(unit_cube, offset_cube):
    arrangement = merge([unit_cube, offset_cube], config=RunConfig(jobs=1))
    text = ObjWriter().write(arrangement).decode("utf-8")
    groups = [line for line in text.splitlines() if line.startswith("g ")]
    assert groups == ["g cell_0", "g cell_1", "g cell_2"]
    assert all(len(line.split()) == 4 for line in text.splitlines() if line.startswith("f "))


def test_exploded_obj_moves_cells(unit_cube, offset_cube):
    arrangement = merge([unit_cube, offset_cube], config=RunConfig(jobs=1))
    plain = ObjWriter().write(arrangement)
    exploded = ObjWriter(ExportConfig(exploded=2.0)).write(arrangement)
    assert plain != exploded
    assert plain.count(b"\nf ") == exploded.count(b"\nf ")


def test_obj_writer_needs_space(triangle_complex):
    with pytest.raises(UnsupportedFormatError):
        ObjWriter().write(triangle_complex)


def test_parquet_tables(unit_cube):
    writer = ParquetWriter(ExportConfig(compression="none"))
    triples = pq.read_table(pa.BufferReader(writer.write(unit_cube)))
    assert triples.schema.equals(TRIPLES_SCHEMA)
    assert triples.num_rows == 24 + 24 + 6
    assert set(triples.column("operator").to_pylist()) == {"d1", "d2", "d3"}

    cells = pq.read_table(pa.BufferReader(writer.write_cells(unit_cube)))
    assert cells.schema.equals(CELLS_SCHEMA)
    assert cells.num_rows == 8 + 12 + 6 + 1
    rows = cells.to_pylist()
    assert rows[1]["coords"] == [1.0, 0.0, 0.0]
    assert rows[-1]["vertices"] == list(range(8))
    assert rows[-1]["coords"] is None


def test_reader_factory(cube_obj, triangle_file):
    assert ReaderFactory.auto_detect_format(cube_obj("a.obj", (0, 0, 0), (1, 1, 1))) == "obj"
    assert ReaderFactory.auto_detect_format(triangle_file) == "lar"
    assert isinstance(ReaderFactory.create_reader("OBJ"), ObjReader)
    with pytest.raises(UnsupportedFormatError):
        ReaderFactory.create_reader("stl")


def test_writer_factory():
    writer = WriterFactory.create_writer("svg", ExportConfig(svg_size=100))
    assert isinstance(writer, SvgWriter)
    assert writer.config.svg_size == 100
    assert writer.get_format_name() == "svg"
    with pytest.raises(UnsupportedFormatError):
        WriterFactory.create_writer("dxf")


def test_service_arranges_files(cube_obj):
    service = ArrangementService(RunConfig(jobs=1))
    files = [cube_obj("a.obj", (0, 0, 0), (1, 1, 1)), cube_obj("b.obj", (2, 0, 0), (3, 1, 1))]
    arrangement = service.arrange(files)
    assert arrangement.n_cells == 2
    assert sorted(arrangement.cell_volumes()) == pytest.approx([1.0, 1.0])


def test_service_writes_parquet_sidecar(unit_cube, tmp_path):
    service = ArrangementService(RunConfig(jobs=1))
    output = tmp_path / "cube.parquet"
    data = service.export(unit_cube, output, "parquet")
    assert output.read_bytes() == data
    sidecar = tmp_path / "cube.cells.parquet"
    assert pq.read_table(sidecar).num_rows == 27


def test_service_export_defaults_to_config(unit_cube):
    config = RunConfig(jobs=1)
    data = ArrangementService(config).export(unit_cube)
    assert json.loads(data)["CV"] == [list(range(8))]


def test_chain_boundary_service(triangle_complex):
    assert ChainService.boundary(triangle_complex, 1, "1,-2,4").tokens() == ["-0", "+4"]
    chain = ChainService.boundary(triangle_complex, 2, "0,1,2", mod2=True)
    assert chain.to_dense().tolist() == [1, 1, 0, 1, 0, 1, 1, 1]
    with pytest.raises(DimensionMismatchError):
        ChainService.boundary(triangle_complex, 3, "0")


def test_adjacency_service(unit_cube):
    vv = ChainService.adjacency(unit_cube, "VV")
    assert vv[0] == [1, 2, 4]
    assert all(len(row) == 3 for row in vv)
    ff = ChainService.adjacency(unit_cube, "FF")
    assert all(len(row) == 4 for row in ff)
    assert ChainService.adjacency(unit_cube, "FT", at_least=True) == [[0]] * 6
    # edge 0 joins corners 0 and 1 on the y = 0 and z = 0 faces
    assert ChainService.adjacency(unit_cube, "EF")[0] == [2, 4]
    assert all(len(row) == 2 for row in ChainService.adjacency(unit_cube, "EF"))
    with pytest.raises(MalformedInputError):
        ChainService.adjacency(unit_cube, "VX")


def test_default_thresholds():
    assert ChainService.default_threshold(0, 0) == 1
    assert ChainService.default_threshold(2, 2) == 2
    assert ChainService.default_threshold(1, 3) == 2


def test_stats_service(unit_cube):
    stats = StatsService.get_complex_stats(unit_cube)
    assert StatsService.summary_line(stats) == "V=8 E=12 F=6 C3=1"
    assert stats["euler"] == 1
    assert stats["components"] == 1
    assert stats["regularized"]


def test_stats_of_an_arrangement():
    arrangement = merge([box_complex([0, 0], [1, 1]), box_complex([2, 0], [3, 2])])
    stats = StatsService.get_complex_stats(arrangement)
    assert stats["shells"] == 2
    assert stats["total_measure"] == pytest.approx(3.0)
    assert stats["dangling"] == 0


def test_library_load_and_export(cube_obj, triangle_file):
    complex_ = load(cube_obj("cube.obj", (0, 0, 0), (2, 1, 1)))
    assert complex_.f_vector == (8, 12, 6)
    assert export(complex_, LarWriter()) == LarWriter().write(complex_)
    assert load(str(triangle_file), reader=LarReader()).f_vector == (6, 8, 3)


def test_stats_count_skeleton_components():
    nested = merge(
        [box_complex([0, 0, 0], [3, 3, 3]), box_complex([1, 1, 1], [2, 2, 2])],
        config=RunConfig(jobs=1),
    )
    stats = StatsService.get_complex_stats(nested)
    assert stats["f_vector"]["C3"] == 2
    assert stats["components"] == 2
    assert stats["shells"] == 2
    planar = box_complex([0, 0], [1, 1])
    assert StatsService.get_complex_stats(planar)["components"] == 1
