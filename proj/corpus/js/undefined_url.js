$('#save').click(function () {
  $.post(u);
});
