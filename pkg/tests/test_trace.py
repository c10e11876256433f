"""
Tests for trace schemas, the streaming parser and per-volume splitting.
"""

import gzip
import io

import pytest
from hypothesis import given, strategies as st

from errors import MalformedLine, SchemaError, TraceFileError
from sources.schema import TraceSchema
from sources.trace import (
    Direction,
    ParseStats,
    TraceRecord,
    Workload,
    open_trace,
    parse_trace,
    read_traces,
    records_to_text,
    split_by_volume,
    write_trace,
)


def parse(text, schema=None, strict=False, stats=None):
    return list(parse_trace(io.StringIO(text), schema, strict=strict, stats=stats))


class TestSchema:
    def test_default_layout(self):
        schema = TraceSchema.default()
        assert schema.columns == {"timestamp": 0, "volume_id": 1, "direction": 2, "offset": 3, "length": 4}
        assert schema.timestamp_scale == 1

    def test_parse_key_value_file(self):
        schema = TraceSchema.parse(
            """
            # sectors and seconds
            volume_id = 0
            direction = 1
            offset = 2
            length = 3
            timestamp = 4
            delimiter = tab
            timestamp_unit = s
            offset_unit_bytes = 512
            length_unit_bytes = 512
            read_tokens = R, Read
            write_tokens = W, Write
            has_header = true
            """
        )
        assert schema.delimiter == "\t"
        assert schema.timestamp_scale == 1_000_000
        assert schema.has_header
        assert schema.direction_lookup()["READ"] == "R"

    def test_duplicate_column_rejected(self):
        with pytest.raises(SchemaError):
            TraceSchema(columns={"timestamp": 0, "volume_id": 0, "direction": 2, "offset": 3, "length": 4})

    def test_missing_field_rejected(self):
        with pytest.raises(SchemaError):
            TraceSchema(columns={"timestamp": 0, "volume_id": 1, "direction": 2, "offset": 3})

    def test_bad_unit_rejected(self):
        with pytest.raises(SchemaError):
            TraceSchema(timestamp_unit="ns")

    def test_overlapping_tokens_rejected(self):
        with pytest.raises(SchemaError):
            TraceSchema(read_tokens=("R",), write_tokens=("r",))

    def test_missing_schema_file(self, tmp_path):
        with pytest.raises(SchemaError):
            TraceSchema.load(tmp_path / "nope.schema")


class TestParseTrace:
    def test_basic_record(self):
        records = parse("100,vol1,R,4096,8192\n")
        assert records == [TraceRecord(100, "vol1", Direction.READ, 4096, 8192)]

    def test_units_are_scaled(self):
        schema = TraceSchema(timestamp_unit="s", offset_unit_bytes=512, length_unit_bytes=512)
        (record,) = parse("1.5,v,W,8,2\n", schema)
        assert record.timestamp_us == 1_500_000
        assert record.offset_bytes == 4096
        assert record.length_bytes == 1024
        assert record.direction is Direction.WRITE

    def test_lenient_mode_skips_malformed_lines(self):
        stats = ParseStats()
        records = parse("1,a,R,0,10\nnot,a,line\n2,a,X,0,10\n3,a,W,0,0\n4,a,W,0,10\n", stats=stats)
        assert [r.timestamp_us for r in records] == [1, 4]
        assert stats.malformed == 3
        assert stats.records == 2
        assert stats.errors[0].line_no == 2

    def test_strict_mode_raises_with_line_number(self):
        with pytest.raises(MalformedLine) as info:
            parse("1,a,R,0,10\n2,a,R,-5,10\n", strict=True)
        assert info.value.line_no == 2
        assert "negative offset" in str(info.value)

    @pytest.mark.parametrize(
        "line, reason",
        [
            ("0,v,R,100.7,1.5", "non-integral offset"),
            ("0,v,R,100,1.5", "non-integral length"),
            ("0,v,R,1e3,10", "non-integral offset"),
            ("0,v,R,0,4_096", "non-integral length"),
        ],
    )
    def test_fractional_byte_fields_are_malformed(self, line, reason):
        with pytest.raises(MalformedLine) as info:
            parse(line + "\n", strict=True)
        assert reason in str(info.value)

        stats = ParseStats()
        assert parse(line + "\n", stats=stats) == []
        assert stats.malformed == 1

    def test_blank_and_comment_lines_are_not_malformed(self):
        stats = ParseStats()
        records = parse("# header comment\n\n1,a,R,0,10\n   \n", stats=stats)
        assert len(records) == 1
        assert stats.malformed == 0
        assert stats.skipped == 3

    def test_header_skipped_when_declared(self):
        schema = TraceSchema(has_header=True)
        assert len(parse("timestamp,volume,op,offset,length\n1,a,R,0,10\n", schema)) == 1

    def test_whitespace_delimiter(self):
        schema = TraceSchema(delimiter=None)
        (record,) = parse("5   vol  r   0 4096\n", schema)
        assert record.volume_id == "vol"
        assert record.direction is Direction.READ

    def test_u64_overflow_rejected(self):
        with pytest.raises(MalformedLine):
            parse(f"1,a,R,{(1 << 64) - 1},10\n", strict=True)

    def test_parse_is_lazy(self):
        lines = iter(["1,a,R,0,10\n", "garbage that would fail strict parsing\n"])
        records = parse_trace(lines, strict=True)
        assert next(records).timestamp_us == 1


class TestFiles:
    def test_missing_file(self, tmp_path):
        with pytest.raises(TraceFileError) as info:
            open_trace(tmp_path / "missing.trace")
        assert info.value.exit_code == 5

    def test_gzip_container(self, tmp_path):
        path = tmp_path / "t.trace.gz"
        with gzip.open(path, "wt") as f:
            f.write("1,a,R,0,10\n2,b,W,4096,10\n")
        records = list(read_traces([path]))
        assert [r.volume_id for r in records] == ["a", "b"]

    def test_read_traces_chains_files(self, tmp_path):
        first, second = tmp_path / "1.trace", tmp_path / "2.trace"
        first.write_text("1,a,R,0,10\n")
        second.write_text("2,a,W,0,10\nbad\n")
        stats = ParseStats()
        assert len(list(read_traces([first, second], stats=stats))) == 2
        assert stats.malformed == 1
        assert stats.lines == 3


class TestSplit:
    def test_split_preserves_first_seen_order(self):
        records = parse("1,b,R,0,10\n2,a,R,0,10\n3,b,W,0,10\n")
        workloads = split_by_volume(records)
        assert list(workloads) == ["b", "a"]
        assert len(workloads["b"]) == 2

    def test_out_of_order_records_are_stably_sorted(self):
        records = parse("5,a,R,0,10\n1,a,W,0,10\n5,a,W,8,10\n")
        workload = split_by_volume(records)["a"]
        assert [(r.timestamp_us, r.offset_bytes) for r in workload] == [(1, 0), (5, 0), (5, 8)]

    def test_foreign_record_rejected(self):
        with pytest.raises(ValueError):
            Workload.from_records("a", [TraceRecord(1, "b", Direction.READ, 0, 1)])


records_strategy = st.lists(
    st.builds(
        TraceRecord,
        st.integers(0, 10**12),
        st.sampled_from(["v0", "v1", "vol-2"]),
        st.sampled_from(list(Direction)),
        st.integers(0, 1 << 40),
        st.integers(1, 1 << 20),
    ),
    max_size=50,
)


@given(records_strategy)
def test_write_then_parse_reproduces_records(records):
    assert parse(records_to_text(records)) == records


def test_write_trace_with_sector_schema_round_trips():
    schema = TraceSchema(timestamp_unit="ms", offset_unit_bytes=512, length_unit_bytes=512, has_header=True)
    records = [TraceRecord(1_500, "v", Direction.WRITE, 1024, 4096)]
    buffer = io.StringIO()
    assert write_trace(records, buffer, schema) == 1
    assert parse(buffer.getvalue(), schema) == records


def test_write_trace_rejects_unaligned_sizes():
    schema = TraceSchema(offset_unit_bytes=512)
    with pytest.raises(ValueError):
        records_to_text([TraceRecord(1, "v", Direction.READ, 100, 512)], schema)
