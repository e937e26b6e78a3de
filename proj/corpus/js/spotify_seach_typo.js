var endpoint = 'https://api.spotify.com/v1/seach';

function lookup(name) {
  $.ajax({
    url: endpoint + '?q=' + encodeURIComponent(name) + '&type=track',
    success: function (res) { fill(res.tracks.items); }
  });
}
