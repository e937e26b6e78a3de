$(function () {
  $.get('/api/local/stats', function (stats) {
    $('#count').text(stats.count);
  });
});
