import pytest
from unittest.mock import patch
from app.utils.error_handler import (
    FermatError,
    ExprSyntaxError,
    NotShiftInvariant,
    UnboundSymbol,
    labelled_errors
)

class TestFermatError:

    def test_to_dict(self):
        """Label, message and details as JSON-ready values"""
        error = NotShiftInvariant((1, -1, 0), -3.14j)
        data = error.to_dict()
        assert data["error"] == "not_shift_invariant"
        assert data["form"] == "[1, -1, 0]"
        assert "d·c" in data["message"]

    def test_syntax_error_position(self):
        """Line and column are part of the message and the details"""
        error = ExprSyntaxError("unexpected ')'", 2, 7)
        assert error.to_dict()["line"] == 2
        assert "line 2, column 7" in str(error)

    def test_unbound_symbol(self):
        """The missing name is kept"""
        assert UnboundSymbol("alpha").to_dict()["symbol"] == "alpha"

class TestLabelledErrors:

    def test_arithmetic_failure_is_labelled(self):
        """ZeroDivisionError becomes a FermatError and is logged"""
        with patch('app.utils.error_handler.logger') as mock_logger:
            with pytest.raises(FermatError) as exc:
                with labelled_errors("construct run"):
                    1 / 0
            mock_logger.error.assert_called_once()
        assert exc.value.message.startswith("construct run")

    def test_labelled_errors_pass_through(self):
        """FermatErrors keep their own label"""
        with pytest.raises(UnboundSymbol):
            with labelled_errors("verify run"):
                raise UnboundSymbol("beta")
