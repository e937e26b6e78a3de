function topTracks(artistId) {
  $.ajax({
    url: 'https://api.spotify.com/v1/artists/' + artistId + '/top-tracks',
    data: {country: 'US'},
    success: function (response) { list(response.tracks); }
  });
}
